"""Closed-form counts over bipartite-graph classes, in exact arithmetic.

Each class ``g`` with ``k`` edges contributes through two statistics: its
degree profile ``psi`` and its neighborhood-class sizes ``deltas``.  The
published weights use ``prod(delta!)`` as the class's automorphism count;
the ``orbit_*`` variants use the true stabilizer order from
:func:`graphs.automorphism_count` instead.  The two agree whenever every
automorphism is a permutation of twin vertices, which fails from ``k = 2``
on (the 2x2 diagonal is the smallest counterexample).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import graphs
from .errors import BoundsError, VerificationError
from .graphs import BipartiteGraph


@lru_cache(maxsize=None)
def factorial(m: int) -> int:
    return math.factorial(m)


def _check_k(n: int, k: int) -> None:
    if not 0 <= k <= n * n:
        raise BoundsError(f"k={k} outside 0..{n * n}")


def _twin_denominator(g: BipartiteGraph) -> int:
    return math.prod(factorial(d) for d in graphs.neighborhood_classes(g).deltas)


def _vertex_product(g: BipartiteGraph) -> int:
    """prod over all vertices of (n - deg v)!"""
    n = g.n
    return math.prod(factorial(n - w.bit_count()) for w in g.rows() + g.cols())


def omega(g: BipartiteGraph) -> Fraction:
    # degrees n-1 and n contribute 1! and 0!, so only i <= n-2 are kept
    psi = graphs.degree_profile(g).psi
    num = math.prod(factorial(g.n - i) ** psi[i] for i in range(g.n - 1))
    return Fraction(num, _twin_denominator(g))


def theta(n: int, k: int, allow_heavy: bool = False) -> Fraction:
    return sum((omega(g) for g in graphs.enumerate_class_reps(n, k, allow_heavy)), Fraction(0))


def _as_integer(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise VerificationError(f"{what} = {value} is not an integer")
    return value.numerator


def b_rational(n: int, k: int, allow_heavy: bool = False) -> Fraction:
    """Twin-class weighted count before the integrality check."""
    _check_k(n, k)
    total = sum(
        (Fraction(1, _twin_denominator(g)) for g in graphs.enumerate_class_reps(n, k, allow_heavy)),
        Fraction(0),
    )
    return factorial(n) ** 2 * total


def b_count(n: int, k: int, allow_heavy: bool = False) -> int:
    """Binary n x n matrices with k ones, by the twin-class weight."""
    return _as_integer(b_rational(n, k, allow_heavy), f"b({n},{k})")


def binomial_identity_check(n: int, allow_heavy: bool = False) -> bool:
    return all(
        b_rational(n, k, allow_heavy) == math.comb(n * n, k) for k in range(n * n + 1)
    )


def q_count(n: int, k: int, allow_heavy: bool = False) -> int:
    _check_k(n, k)
    total = sum(
        (Fraction(_vertex_product(g), _twin_denominator(g))
         for g in graphs.enumerate_class_reps(n, k, allow_heavy)),
        Fraction(0),
    )
    return _as_integer(factorial(n) ** (2 * (n + 1)) * total, f"q({n},{k})")


def s_perm_count(n: int) -> int:
    if n < 1:
        raise BoundsError(f"n must be positive, got {n}")
    return factorial(n) ** (2 * n)


def theta_table(n: int, jobs: int = 1, allow_heavy: bool = False) -> list[Fraction]:
    graphs.check_side(n, allow_heavy)
    ks = range(n * n + 1)
    if jobs <= 1:
        return [theta(n, k, allow_heavy) for k in ks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda k: theta(n, k, allow_heavy), ks))


def _alternating_sum(values) -> Fraction:
    return sum(((-1) ** k * v for k, v in enumerate(values) if k >= 1), Fraction(0))


def disjoint_ordered_by_vertices(n: int, allow_heavy: bool = False) -> int:
    """Vertex-product form: sum over vertices of (n - deg)! per class."""
    graphs.check_side(n, allow_heavy)
    f = factorial(n)
    per_k = [
        sum((Fraction(_vertex_product(g), _twin_denominator(g))
             for g in graphs.enumerate_class_reps(n, k, allow_heavy)), Fraction(0))
        for k in range(n * n + 1)
    ]
    return _as_integer(f ** (4 * n) + f ** (2 * (n + 1)) * _alternating_sum(per_k), f"D(n={n})")


def disjoint_ordered_by_theta(n: int, jobs: int = 1, allow_heavy: bool = False) -> int:
    """Degree-profile form through theta(n, k)."""
    f = factorial(n)
    table = theta_table(n, jobs, allow_heavy)
    return _as_integer(f ** (4 * n) + f ** (2 * (n + 1)) * _alternating_sum(table), f"D(n={n})")


def disjoint_ordered(n: int, jobs: int = 1, allow_heavy: bool = False) -> int:
    by_vertices = disjoint_ordered_by_vertices(n, allow_heavy)
    by_theta = disjoint_ordered_by_theta(n, jobs, allow_heavy)
    if by_vertices != by_theta:
        raise VerificationError(f"n={n}: vertex form {by_vertices} != theta form {by_theta}")
    if by_vertices < 0 or by_vertices % 2:
        raise VerificationError(f"n={n}: D={by_vertices} is not a nonnegative even integer")
    return by_vertices


def disjoint_unordered(n: int, jobs: int = 1, allow_heavy: bool = False) -> int:
    total = disjoint_ordered(n, jobs, allow_heavy)
    if total % 2:
        raise VerificationError(f"n={n}: D={total} is odd")
    return total // 2


def z_from_sigma(sigma: int, n: int) -> int:
    """Number of n^2-cliques of the disjointness graph given the Sudoku count."""
    q, r = divmod(sigma, factorial(n * n))
    if r:
        raise VerificationError(f"sigma={sigma} is not divisible by ({n * n})!")
    return q


# -- orbit-weighted variants ------------------------------------------------

def orbit_b_count(n: int, k: int, allow_heavy: bool = False) -> int:
    _check_k(n, k)
    return sum(graphs.orbit_size(g) for g in graphs.enumerate_class_reps(n, k, allow_heavy))


def orbit_q_count(n: int, k: int, allow_heavy: bool = False) -> int:
    _check_k(n, k)
    per_pi = sum(
        graphs.orbit_size(g) * _vertex_product(g)
        for g in graphs.enumerate_class_reps(n, k, allow_heavy)
    )
    return s_perm_count(n) * per_pi


def orbit_disjoint_ordered(n: int, allow_heavy: bool = False) -> int:
    graphs.check_side(n, allow_heavy)
    return sum((-1) ** k * orbit_q_count(n, k, allow_heavy) for k in range(n * n + 1))


# -- report ----------------------------------------------------------------

@dataclass
class ThetaRecord:
    k: int
    classes: int
    theta: Fraction


@dataclass
class CountReport:
    n: int
    records: list[ThetaRecord] = field(default_factory=list)
    D: int = 0
    d: int = 0
    dual_path_ok: bool = False
    orbit_D: int | None = None

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "theta": [
                {"k": r.k, "classes": r.classes, "theta": fraction_str(r.theta)}
                for r in self.records
            ],
            "D": str(self.D),
            "d": str(self.d),
            "dual_path_ok": self.dual_path_ok,
        }
        if self.orbit_D is not None:
            out["orbit_D"] = str(self.orbit_D)
            out["orbit_d"] = str(self.orbit_D // 2)
        return out


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def count_report(n: int, jobs: int = 1, allow_heavy: bool = False) -> CountReport:
    table = theta_table(n, jobs, allow_heavy)
    counts = graphs.graph_count_table(n, allow_heavy)
    D = disjoint_ordered(n, jobs, allow_heavy)
    return CountReport(
        n=n,
        records=[ThetaRecord(k, counts[k], t) for k, t in enumerate(table)],
        D=D,
        d=D // 2,
        dual_path_ok=True,
        orbit_D=orbit_disjoint_ordered(n, allow_heavy),
    )
