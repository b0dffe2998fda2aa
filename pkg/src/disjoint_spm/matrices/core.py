"""S-permutation matrices and their ordered-pair grid form.

An n^2 x n^2 S-permutation matrix has exactly one 1 in each n x n block.  We
store it as the in-block coordinates ``(a, b)`` (1-based) of that 1, block by
block in row-major block order.  The same data read as an n x n grid of
ordered pairs is a :class:`PiMatrix`; the two views are in bijection.

Blocks (cells) are 0-based ``(s, t)`` with index ``s*n + t``.  The pair
``(a, b)`` has symbol code ``(a-1)*n + (b-1)``.  The fingerprint sets bit
``cell*n*n + symbol``, so two matrices share a 1 iff their fingerprints
intersect.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import permutations, product
from typing import Sequence

import numpy as np

from ..errors import BoundsError, FeasibilityError, IncomparableError, ValidationError

Pair = tuple[int, int]

ENUMERABLE_MAX_N = 3


def _is_perm(values: Sequence[int], n: int) -> bool:
    return sorted(values) == list(range(1, n + 1))


@dataclass(frozen=True)
class PiMatrix:
    n: int
    grid: tuple[tuple[Pair, ...], ...]

    def __post_init__(self):
        n = self.n
        if len(self.grid) != n or any(len(row) != n for row in self.grid):
            raise ValidationError(f"grid is not {n}x{n}")
        for row in self.grid:
            for pair in row:
                if len(pair) != 2 or not all(1 <= x <= n for x in pair):
                    raise ValidationError(f"bad entry {pair!r}")
        for i, row in enumerate(self.grid):
            if not _is_perm([a for a, _ in row], n):
                raise ValidationError(f"row {i} first components are not a permutation")
        for j in range(n):
            if not _is_perm([self.grid[i][j][1] for i in range(n)], n):
                raise ValidationError(f"column {j} second components are not a permutation")

    @classmethod
    def from_permutations(cls, rhos: Sequence[Sequence[int]],
                          sigmas: Sequence[Sequence[int]]) -> "PiMatrix":
        """Cell (i, j) is ``(rhos[i][j], sigmas[j][i])``; entries 1-based."""
        n = len(rhos)
        grid = tuple(
            tuple((rhos[i][j], sigmas[j][i]) for j in range(n)) for i in range(n)
        )
        return cls(n, grid)

    def symbols(self) -> tuple[int, ...]:
        n = self.n
        return tuple((a - 1) * n + (b - 1) for row in self.grid for a, b in row)


@dataclass(frozen=True)
class SPermutationMatrix:
    n: int
    positions: tuple[Pair, ...]

    def __post_init__(self):
        n = self.n
        if len(self.positions) != n * n:
            raise ValidationError(f"expected {n * n} blocks, got {len(self.positions)}")
        rows, cols = set(), set()
        for cell, (a, b) in enumerate(self.positions):
            if not (1 <= a <= n and 1 <= b <= n):
                raise ValidationError(f"block {cell}: in-block position {(a, b)} out of range")
            s, t = divmod(cell, n)
            rows.add(s * n + a - 1)
            cols.add(t * n + b - 1)
        if len(rows) != n * n or len(cols) != n * n:
            raise ValidationError("not a permutation matrix: a row or column holds two 1s")

    @classmethod
    def from_symbols(cls, n: int, codes: Sequence[int]) -> "SPermutationMatrix":
        return cls(n, tuple((int(c) // n + 1, int(c) % n + 1) for c in codes))

    @classmethod
    def from_dense(cls, matrix: Sequence[Sequence[int]]) -> "SPermutationMatrix":
        size = len(matrix)
        n = int(round(size ** 0.5))
        if n * n != size or any(len(row) != size for row in matrix):
            raise ValidationError("matrix is not n^2 x n^2")
        positions = []
        for s in range(n):
            for t in range(n):
                ones = [
                    (a + 1, b + 1)
                    for a in range(n) for b in range(n)
                    if matrix[s * n + a][t * n + b]
                ]
                if len(ones) != 1:
                    raise ValidationError(f"block ({s}, {t}) holds {len(ones)} ones")
                positions.append(ones[0])
        if any(x not in (0, 1) for row in matrix for x in row):
            raise ValidationError("matrix is not binary")
        return cls(n, tuple(positions))

    def symbols(self) -> tuple[int, ...]:
        n = self.n
        return tuple((a - 1) * n + (b - 1) for a, b in self.positions)

    @cached_property
    def fingerprint(self) -> int:
        nn = self.n * self.n
        return sum(1 << (cell * nn + sym) for cell, sym in enumerate(self.symbols()))

    def ones(self) -> list[tuple[int, int]]:
        """Global 0-based (row, column) of every 1, block-major."""
        n = self.n
        out = []
        for cell, (a, b) in enumerate(self.positions):
            s, t = divmod(cell, n)
            out.append((s * n + a - 1, t * n + b - 1))
        return out

    def to_dense(self) -> list[list[int]]:
        size = self.n * self.n
        out = [[0] * size for _ in range(size)]
        for r, c in self.ones():
            out[r][c] = 1
        return out


def pi_to_sperm(p: PiMatrix) -> SPermutationMatrix:
    return SPermutationMatrix(p.n, tuple(pair for row in p.grid for pair in row))


def sperm_to_pi(a: SPermutationMatrix) -> PiMatrix:
    n = a.n
    return PiMatrix(n, tuple(tuple(a.positions[i * n:(i + 1) * n]) for i in range(n)))


def is_disjoint(x: SPermutationMatrix, y: SPermutationMatrix) -> bool:
    if x.n != y.n:
        raise IncomparableError(f"cannot compare n={x.n} with n={y.n}")
    return x.fingerprint & y.fingerprint == 0


def check_enumerable(n: int) -> None:
    if n < 1:
        raise BoundsError(f"n must be positive, got {n}")
    if n > ENUMERABLE_MAX_N:
        raise FeasibilityError(f"Pi_{n} has {math.factorial(n) ** (2 * n)} elements; max n is 3")


def enumerate_pi(n: int) -> list[PiMatrix]:
    """All of Pi_n, lexicographic over (rho_1..rho_n, sigma_1..sigma_n)."""
    check_enumerable(n)
    perms = list(permutations(range(1, n + 1)))
    return [
        PiMatrix.from_permutations(tup[:n], tup[n:])
        for tup in product(perms, repeat=2 * n)
    ]


@lru_cache(maxsize=None)
def symbol_table(n: int) -> np.ndarray:
    """Row v holds the n*n symbol codes of the v-th element of ``enumerate_pi(n)``."""
    check_enumerable(n)
    perms = np.array(list(permutations(range(n))), dtype=np.int64)
    count = len(perms)
    # index[v, m] = rank of the m-th permutation in the tuple of vertex v
    index = np.indices((count,) * (2 * n)).reshape(2 * n, -1).T
    out = np.empty((len(index), n * n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            a = perms[index[:, i], j]
            b = perms[index[:, n + j], i]
            out[:, i * n + j] = a * n + b
    out.flags.writeable = False
    return out


def fingerprint_words(symbols: np.ndarray, n: int) -> np.ndarray:
    """Pack fingerprints of a symbol table into uint64 words, shape (N, W)."""
    nn = n * n
    words = -(-(nn * nn) // 64)
    bits = np.arange(nn, dtype=np.int64) * nn + symbols
    out = np.zeros((len(symbols), words), dtype=np.uint64)
    one = np.uint64(1)
    for c in range(nn):
        col = bits[:, c]
        for w in range(words):
            hit = (col >> 6) == w
            out[hit, w] |= one << (col[hit] & 63).astype(np.uint64)
    return out
