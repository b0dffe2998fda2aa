"""The disjointness graph on all S-permutation matrices of one order.

Vertices follow ``enumerate_pi`` order.  Adjacency rows are packed little-endian
into uint64 words: bit ``u`` of row ``v`` is set iff matrices ``v`` and ``u``
share no 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ..errors import BoundsError, FeasibilityError
from .core import SPermutationMatrix, check_enumerable, fingerprint_words, symbol_table

CHUNK = 256


@dataclass(frozen=True, eq=False)
class DisjointnessGraph:
    n: int
    symbols: np.ndarray
    adjacency: np.ndarray

    @property
    def order(self) -> int:
        return len(self.symbols)

    def vertex(self, v: int) -> SPermutationMatrix:
        return SPermutationMatrix.from_symbols(self.n, self.symbols[v])

    def neighbors(self, v: int) -> int:
        return int.from_bytes(self.adjacency[v].astype("<u8").tobytes(), "little")

    def is_edge(self, u: int, v: int) -> bool:
        return bool(int(self.adjacency[u, v >> 6]) >> (v & 63) & 1)

    def degrees(self) -> np.ndarray:
        return np.bitwise_count(self.adjacency).sum(axis=1)

    def edge_count(self) -> int:
        return int(self.degrees().sum()) // 2


def build_disjointness_graph(n: int, allow_large: bool = False) -> DisjointnessGraph:
    check_enumerable(n)
    if n == 3 and not allow_large:
        raise FeasibilityError("the n=3 graph needs about 272 MB; pass allow_large=True")
    symbols = symbol_table(n)
    fp = fingerprint_words(symbols, n)
    total = len(fp)
    words = -(-total // 64)
    adjacency = np.zeros((total, words), dtype=np.uint64)
    padded = np.zeros((CHUNK, words * 64), dtype=bool)
    for start in range(0, total, CHUNK):
        block = fp[start:start + CHUNK]
        clash = np.zeros((len(block), total), dtype=bool)
        for w in range(fp.shape[1]):
            clash |= (block[:, w, None] & fp[None, :, w]) != 0
        rows = padded[:len(block)]
        rows[:, :total] = ~clash
        packed = np.packbits(rows, axis=1, bitorder="little")
        adjacency[start:start + len(block)] = packed.view("<u8")
    return DisjointnessGraph(n, symbols, adjacency)


def iter_cliques(graph: DisjointnessGraph, size: int) -> Iterator[tuple[int, ...]]:
    """Vertex sets of ``size`` pairwise-adjacent vertices, increasing indices."""
    nbrs = [graph.neighbors(v) for v in range(graph.order)]

    def extend(clique: list[int], cand: int):
        if len(clique) == size:
            yield tuple(clique)
            return
        while cand and len(clique) + cand.bit_count() >= size:
            low = cand & -cand
            cand ^= low
            v = low.bit_length() - 1
            clique.append(v)
            yield from extend(clique, cand & nbrs[v])
            clique.pop()

    yield from extend([], (1 << graph.order) - 1)


def count_cliques(graph: DisjointnessGraph, size: int | None = None) -> int:
    if graph.n != 2:
        raise FeasibilityError(f"clique counting is supported only for n=2, got n={graph.n}")
    size = graph.n * graph.n if size is None else size
    if size < 1:
        raise BoundsError(f"clique size must be positive, got {size}")
    return sum(1 for _ in iter_cliques(graph, size))


def write_clique_list(fp, cliques) -> None:
    for clique in cliques:
        fp.write(" ".join(str(v) for v in clique) + "\n")
