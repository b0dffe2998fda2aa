"""Sudoku matrices as sums of mutually disjoint S-permutation matrices."""
from __future__ import annotations

import math
import random
import sys
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence, TextIO

from ..errors import BoundsError, SamplingError, ValidationError
from .core import SPermutationMatrix
from ..textio import data_lines

DEFAULT_NODE_BUDGET = 10**6
DEFAULT_RESTARTS = 50


def validate_sudoku(grid) -> bool:
    """True iff every row, column and block is a permutation of 1..n^2."""
    try:
        size = len(grid)
        rows = [list(row) for row in grid]
    except TypeError:
        return False
    n = math.isqrt(size)
    if size == 0 or n * n != size or any(len(row) != size for row in rows):
        return False
    want = set(range(1, size + 1))
    if any(type(x) is not int for row in rows for x in row):
        return False
    if any(set(row) != want for row in rows):
        return False
    if any({rows[r][c] for r in range(size)} != want for c in range(size)):
        return False
    for s in range(n):
        for t in range(n):
            block = {rows[s * n + a][t * n + b] for a in range(n) for b in range(n)}
            if block != want:
                return False
    return True


@dataclass(frozen=True)
class SudokuMatrix:
    n: int
    grid: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.grid) != self.n * self.n or not validate_sudoku(self.grid):
            raise ValidationError("grid is not a Sudoku matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "SudokuMatrix":
        size = len(rows)
        n = math.isqrt(size)
        return cls(n, tuple(tuple(int(x) for x in row) for row in rows))

    def to_text(self) -> str:
        return "".join(" ".join(str(x) for x in row) + "\n" for row in self.grid)

    @classmethod
    def from_text(cls, text: str) -> "SudokuMatrix":
        rows = [line.split() for line in data_lines(text.splitlines())]
        try:
            return cls.from_rows([[int(x) for x in row] for row in rows])
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc


def _check_family(family: Sequence[SPermutationMatrix]) -> int:
    if not family:
        raise ValidationError("empty family")
    n = family[0].n
    if any(a.n != n for a in family):
        raise ValidationError("family mixes matrix orders")
    if len(family) != n * n:
        raise ValidationError(f"family has {len(family)} matrices, need {n * n}")
    for i, j in combinations(range(len(family)), 2):
        if family[i].fingerprint & family[j].fingerprint:
            raise ValidationError(f"matrices {i} and {j} are not disjoint")
    return n


def compose_sudoku(family: Sequence[SPermutationMatrix],
                   labeling: Sequence[int] | None = None) -> SudokuMatrix:
    """Sum ``labeling[i] * family[i]``; the default labeling is 1..n^2."""
    n = _check_family(family)
    size = n * n
    labels = list(range(1, size + 1)) if labeling is None else list(labeling)
    if sorted(labels) != list(range(1, size + 1)):
        raise ValidationError(f"labeling {labels} is not a permutation of 1..{size}")
    grid = [[0] * size for _ in range(size)]
    for label, a in zip(labels, family):
        for r, c in a.ones():
            grid[r][c] = label
    return SudokuMatrix(n, tuple(tuple(row) for row in grid))


def decompose_sudoku(p: SudokuMatrix | Sequence[Sequence[int]]) -> list[SPermutationMatrix]:
    """Indicator matrices of the values 1..n^2, in value order."""
    if not isinstance(p, SudokuMatrix):
        if not validate_sudoku(p):
            raise ValidationError("grid is not a Sudoku matrix")
        p = SudokuMatrix.from_rows(p)
    n, size = p.n, p.n * p.n
    where: dict[int, list] = {v: [None] * size for v in range(1, size + 1)}
    for s in range(n):
        for t in range(n):
            for a in range(n):
                for b in range(n):
                    where[p.grid[s * n + a][t * n + b]][s * n + t] = (a + 1, b + 1)
    return [SPermutationMatrix(n, tuple(where[v])) for v in range(1, size + 1)]


class _OutOfBudget(Exception):
    pass


def _search(n: int, rng: random.Random, budget: int) -> list[SPermutationMatrix] | None:
    # Place symbol after symbol; each symbol is one S-permutation matrix,
    # built block by block on the cells left free by earlier symbols.
    size = n * n
    taken = [[False] * size for _ in range(size)]
    band_rows = [0] * n
    stack_cols = [0] * n
    chosen: list[list[tuple[int, int]]] = [[] for _ in range(size)]
    nodes = 0

    def place(symbol: int, cell: int) -> bool:
        nonlocal nodes
        if cell == size:
            if symbol + 1 == size:
                return True
            saved = band_rows[:], stack_cols[:]
            band_rows[:] = [0] * n
            stack_cols[:] = [0] * n
            if place(symbol + 1, 0):
                return True
            band_rows[:], stack_cols[:] = saved
            return False
        s, t = divmod(cell, n)
        options = [
            (a, b)
            for a in range(n) if not band_rows[s] >> a & 1
            for b in range(n) if not stack_cols[t] >> b & 1
            if not taken[s * n + a][t * n + b]
        ]
        rng.shuffle(options)
        for a, b in options:
            nodes += 1
            if nodes > budget:
                raise _OutOfBudget
            taken[s * n + a][t * n + b] = True
            band_rows[s] |= 1 << a
            stack_cols[t] |= 1 << b
            chosen[symbol].append((a + 1, b + 1))
            if place(symbol, cell + 1):
                return True
            chosen[symbol].pop()
            band_rows[s] ^= 1 << a
            stack_cols[t] ^= 1 << b
            taken[s * n + a][t * n + b] = False
        return False

    try:
        found = place(0, 0)
    except _OutOfBudget:
        return None
    if not found:
        return None
    return [SPermutationMatrix(n, tuple(cells)) for cells in chosen]


def sample_disjoint_family(n: int, seed: int, node_budget: int = DEFAULT_NODE_BUDGET,
                           restarts: int = DEFAULT_RESTARTS) -> list[SPermutationMatrix]:
    """n^2 mutually disjoint S-permutation matrices, reproducible from ``seed``."""
    if n < 2:
        raise BoundsError(f"n must be at least 2, got {n}")
    rng = random.Random(seed)
    # one stack frame per placed block
    sys.setrecursionlimit(max(sys.getrecursionlimit(), n**4 + 200))
    for _ in range(restarts):
        family = _search(n, rng, node_budget)
        if family is not None:
            return family
    raise SamplingError(f"no family found for n={n} seed={seed} in {restarts} attempts")


def write_family(fp: TextIO, family: Sequence[SPermutationMatrix]) -> None:
    n = family[0].n if family else 0
    fp.write(f"n={n} count={len(family)}\n")
    for a in family:
        fp.write(" ".join(str(c) for c in a.symbols()) + "\n")


def read_family(fp: TextIO) -> list[SPermutationMatrix]:
    lines = data_lines(fp)
    header = next(lines, "").split()
    try:
        fields = dict(item.split("=", 1) for item in header)
        n, count = int(fields["n"]), int(fields["count"])
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"bad family header: {' '.join(header)!r}") from exc
    family = [
        SPermutationMatrix.from_symbols(n, [int(x) for x in line.split()])
        for line in lines
    ]
    if len(family) != count:
        raise ValidationError(f"header says {count} matrices, found {len(family)}")
    return family
