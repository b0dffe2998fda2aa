"""Bipartite graphs with two labeled sides of equal size, up to isomorphism.

A graph is stored as an ``n*n``-bit biadjacency mask: bit ``r*n + c`` is set
iff row-vertex ``r`` is joined to column-vertex ``c``.  Isomorphism permutes
rows and columns independently and never swaps the two sides.

The canonical representative of a class is the numerically smallest mask in
its orbit.  For a fixed column relabeling the best row relabeling simply
sorts the row words in decreasing order (row 0 is the least significant
word), so canonicalization costs ``n!`` column permutations instead of
``(n!)**2`` pairs.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, permutations
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import BoundsError, FeasibilityError, IncomparableError, ValidationError
from .textio import data_lines

GUARANTEED_MAX_N = 4
HEAVY_MAX_N = 5


@dataclass(frozen=True, order=True)
class BipartiteGraph:
    n: int
    edges: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise BoundsError(f"side size must be positive, got {self.n}")
        if not 0 <= self.edges < 1 << (self.n * self.n):
            raise BoundsError(f"mask {self.edges:#x} does not fit {self.n}x{self.n}")

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "BipartiteGraph":
        mask = 0
        for r, c in pairs:
            if not (0 <= r < n and 0 <= c < n):
                raise BoundsError(f"edge ({r}, {c}) outside {n}x{n}")
            mask |= 1 << (r * n + c)
        return cls(n, mask)

    @property
    def k(self) -> int:
        return self.edges.bit_count()

    def has_edge(self, r: int, c: int) -> bool:
        return bool(self.edges >> (r * self.n + c) & 1)

    def rows(self) -> tuple[int, ...]:
        """Row words: bit ``c`` of word ``r`` is the edge (r, c)."""
        full = (1 << self.n) - 1
        return tuple((self.edges >> (r * self.n)) & full for r in range(self.n))

    def cols(self) -> tuple[int, ...]:
        """Column words: bit ``r`` of word ``c`` is the edge (r, c)."""
        n = self.n
        return tuple(
            sum(((self.edges >> (r * n + c)) & 1) << r for r in range(n))
            for c in range(n)
        )

    def edge_list(self) -> list[tuple[int, int]]:
        n = self.n
        return [(b // n, b % n) for b in range(n * n) if self.edges >> b & 1]

    def complement(self) -> "BipartiteGraph":
        return BipartiteGraph(self.n, ((1 << (self.n * self.n)) - 1) ^ self.edges)

    def to_hex(self) -> str:
        return format(self.edges, f"0{hex_width(self.n)}x")

    @classmethod
    def from_hex(cls, n: int, text: str) -> "BipartiteGraph":
        return cls(n, int(text, 16))


@dataclass(frozen=True)
class DegreeProfile:
    """``psi[i]`` is the number of vertices (either side) of degree ``i``."""

    psi: tuple[int, ...]


@dataclass(frozen=True)
class ClassMultiset:
    """Sizes of the neighborhood-equality classes, sorted ascending."""

    deltas: tuple[int, ...]


def hex_width(n: int) -> int:
    return -(-(n * n) // 4)


def relabel(g: BipartiteGraph, rho: Sequence[int], sigma: Sequence[int]) -> BipartiteGraph:
    """Move edge (r, c) to (rho[r], sigma[c])."""
    return BipartiteGraph.from_edges(g.n, ((rho[r], sigma[c]) for r, c in g.edge_list()))


@lru_cache(maxsize=None)
def _column_tables(n: int) -> np.ndarray:
    # table[s, w] = row word w with column c moved to perm_s[c]
    perms = list(permutations(range(n)))
    words = np.arange(1 << n)
    out = np.zeros((len(perms), 1 << n), dtype=np.int64)
    for s, perm in enumerate(perms):
        for c in range(n):
            out[s] |= ((words >> c) & 1) << perm[c]
    return out


def _pack(rows: Sequence[int], n: int) -> int:
    return sum(w << (n * r) for r, w in enumerate(rows))


def canonical_form(g: BipartiteGraph) -> BipartiteGraph:
    n = g.n
    rows = g.rows()
    best = g.edges
    for table in _column_tables(n):
        moved = sorted((int(table[w]) for w in rows), reverse=True)
        best = min(best, _pack(moved, n))
    return BipartiteGraph(n, best)


def is_isomorphic(g1: BipartiteGraph, g2: BipartiteGraph) -> bool:
    if g1.n != g2.n:
        raise IncomparableError(f"cannot compare graphs with n={g1.n} and n={g2.n}")
    return canonical_form(g1) == canonical_form(g2)


def automorphism_count(g: BipartiteGraph) -> int:
    """Order of the stabilizer of ``g`` in S_n x S_n (rows x columns)."""
    rows = Counter(g.rows())
    per_sigma = math.prod(math.factorial(m) for m in rows.values())
    hits = sum(
        1 for table in _column_tables(g.n)
        if Counter(int(table[w]) for w in g.rows()) == rows
    )
    return hits * per_sigma


def orbit_size(g: BipartiteGraph) -> int:
    """Number of labeled masks isomorphic to ``g``."""
    return math.factorial(g.n) ** 2 // automorphism_count(g)


def check_side(n: int, allow_heavy: bool = False) -> None:
    if n < 2:
        raise BoundsError(f"graph enumeration needs n >= 2, got {n}")
    if n > HEAVY_MAX_N:
        raise FeasibilityError(f"n={n} exceeds the supported maximum {HEAVY_MAX_N}")
    if n > GUARANTEED_MAX_N and not allow_heavy:
        raise FeasibilityError(f"n={n} enumeration is heavy; pass allow_heavy=True")


@lru_cache(maxsize=None)
def _class_masks(n: int) -> tuple[tuple[int, ...], ...]:
    # Every class minimum has its rows in decreasing order, so scanning row
    # multisets covers every class exactly once.
    tables = _column_tables(n)
    rows = np.array(list(combinations_with_replacement(range(1 << n), n)), dtype=np.int64)
    rows = rows[:, ::-1]
    shifts = n * np.arange(n, dtype=np.int64)
    own = (rows << shifts).sum(axis=1)
    best = own.copy()
    for table in tables:
        moved = -np.sort(-table[rows], axis=1)
        np.minimum(best, (moved << shifts).sum(axis=1), out=best)
    reps = np.sort(own[own == best])
    ks = np.bitwise_count(reps)
    return tuple(tuple(int(m) for m in reps[ks == k]) for k in range(n * n + 1))


def enumerate_class_reps(n: int, k: int, allow_heavy: bool = False) -> list[BipartiteGraph]:
    """One canonical graph per isomorphism class with ``k`` edges, sorted by mask."""
    check_side(n, allow_heavy)
    if not 0 <= k <= n * n:
        raise BoundsError(f"k={k} outside 0..{n * n}")
    return [BipartiteGraph(n, m) for m in _class_masks(n)[k]]


def graph_count_table(n: int, allow_heavy: bool = False) -> list[int]:
    check_side(n, allow_heavy)
    return [len(masks) for masks in _class_masks(n)]


def degree_profile(g: BipartiteGraph) -> DegreeProfile:
    psi = [0] * (g.n + 1)
    for word in g.rows() + g.cols():
        psi[word.bit_count()] += 1
    return DegreeProfile(tuple(psi))


def neighborhood_classes(g: BipartiteGraph) -> ClassMultiset:
    # Equal words on one side means equal neighborhoods; isolated vertices
    # share the zero word and so group per side automatically.
    sizes = list(Counter(g.rows()).values()) + list(Counter(g.cols()).values())
    return ClassMultiset(tuple(sorted(sizes)))


def write_class_file(fp: TextIO, n: int, k: int, graphs: Sequence[BipartiteGraph]) -> None:
    fp.write(f"n={n} k={k} count={len(graphs)}\n")
    for g in graphs:
        fp.write(g.to_hex() + "\n")


def read_class_file(fp: TextIO) -> tuple[int, int, list[BipartiteGraph]]:
    lines = data_lines(fp)
    header = next(lines, "").split()
    try:
        fields = dict(item.split("=", 1) for item in header)
        n, k, count = int(fields["n"]), int(fields["k"]), int(fields["count"])
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"bad class-file header: {' '.join(header)!r}") from exc
    graphs = [BipartiteGraph.from_hex(n, line) for line in lines]
    if len(graphs) != count:
        raise ValidationError(f"header says {count} graphs, found {len(graphs)}")
    for g in graphs:
        if g.k != k:
            raise ValidationError(f"graph {g.to_hex()} has {g.k} edges, expected {k}")
    return n, k, graphs
