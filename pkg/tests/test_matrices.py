import itertools
import math
import random

import numpy as np
import pytest

from disjoint_spm import formulas
from disjoint_spm import matrices as mx
from disjoint_spm.errors import FeasibilityError, IncomparableError, ValidationError


def raw_s_permutation_matrices(n):
    """Every n^2 x n^2 permutation matrix with one 1 per block, as sets of (row, col)."""
    size = n * n
    out = []
    for p in itertools.permutations(range(size)):
        if len({(r // n, p[r] // n) for r in range(size)}) == size:
            out.append(frozenset(enumerate(p)))
    return out


def cellwise_disjoint(p, q):
    return all(p.grid[i][j] != q.grid[i][j] for i in range(p.n) for j in range(p.n))


def test_enumerate_pi_sizes():
    assert len(mx.enumerate_pi(1)) == 1
    assert len(mx.enumerate_pi(2)) == 16
    assert len(mx.symbol_table(3)) == 46_656
    with pytest.raises(FeasibilityError):
        mx.enumerate_pi(4)


def test_enumerate_pi_order_and_table_agree():
    pis = mx.enumerate_pi(2)
    assert len(set(pis)) == 16
    table = mx.symbol_table(2)
    assert [p.symbols() for p in pis] == [tuple(row) for row in table.tolist()]
    first = pis[0]
    assert first == mx.PiMatrix.from_permutations([(1, 2), (1, 2)], [(1, 2), (1, 2)])


def test_symbol_table_n3_matches_objects_on_sample():
    rng = random.Random(3)
    perms = list(itertools.permutations((1, 2, 3)))
    table = mx.symbol_table(3)
    for v in rng.sample(range(len(table)), 500):
        digits = np.unravel_index(v, (6,) * 6)
        p = mx.PiMatrix.from_permutations([perms[d] for d in digits[:3]],
                                          [perms[d] for d in digits[3:]])
        assert p.symbols() == tuple(table[v].tolist())


def test_pi_validation():
    with pytest.raises(ValidationError):
        mx.PiMatrix(2, (((1, 1), (1, 2)), ((2, 1), (2, 2))))  # row 0 first components 1,1
    with pytest.raises(ValidationError):
        mx.PiMatrix(2, (((1, 1), (2, 1)), ((2, 1), (1, 2))))  # column 0 second components 1,1
    with pytest.raises(ValidationError):
        mx.PiMatrix(2, (((1, 3), (2, 1)), ((2, 2), (1, 2))))


def test_identity_permutations_give_expected_matrix():
    p = mx.PiMatrix.from_permutations([(1, 2), (1, 2)], [(1, 2), (1, 2)])
    a = mx.pi_to_sperm(p)
    # block (i, j) carries its 1 at in-block (rho_i(j), sigma_j(i)) = (j, i), 1-based
    assert a.positions == ((1, 1), (2, 1), (1, 2), (2, 2))
    assert a.to_dense() == [
        [1, 0, 0, 0],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [0, 0, 0, 1],
    ]


def test_bijection_exhaustive_n2():
    pis = mx.enumerate_pi(2)
    images = [mx.pi_to_sperm(p) for p in pis]
    assert len(set(images)) == 16
    assert all(mx.sperm_to_pi(a) == p for a, p in zip(images, pis))
    dense = {frozenset((r, c) for r, row in enumerate(a.to_dense()) for c, x in enumerate(row) if x)
             for a in images}
    assert dense == set(raw_s_permutation_matrices(2))


def test_bijection_sampled_n3():
    table = mx.symbol_table(3)
    rng = random.Random(0)
    for v in rng.sample(range(len(table)), 10_000):
        a = mx.SPermutationMatrix.from_symbols(3, table[v])
        p = mx.sperm_to_pi(a)
        assert mx.pi_to_sperm(p) == a
        assert mx.sperm_to_pi(mx.pi_to_sperm(p)) == p


def test_sperm_validation_and_dense_roundtrip():
    a = mx.pi_to_sperm(mx.enumerate_pi(2)[5])
    assert mx.SPermutationMatrix.from_dense(a.to_dense()) == a
    dense = a.to_dense()
    for row in dense:
        assert sum(row) == 1
    assert all(sum(col) == 1 for col in zip(*dense))
    with pytest.raises(ValidationError):
        mx.SPermutationMatrix(2, ((1, 1), (1, 2), (1, 1), (2, 2)))  # rows 0 reused in band 0
    bad = [row[:] for row in dense]
    bad[0] = [1, 1, 0, 0] if bad[0][0] == 0 else [1, 0, 1, 0]
    with pytest.raises(ValidationError):
        mx.SPermutationMatrix.from_dense(bad)


def test_is_disjoint_basics():
    pis = mx.enumerate_pi(2)
    a = [mx.pi_to_sperm(p) for p in pis]
    assert not mx.is_disjoint(a[0], a[0])
    with pytest.raises(IncomparableError):
        mx.is_disjoint(a[0], mx.pi_to_sperm(mx.enumerate_pi(1)[0]))


def test_disjointness_symmetric_irreflexive_and_fingerprint_exhaustive_n2():
    pis = mx.enumerate_pi(2)
    a = [mx.pi_to_sperm(p) for p in pis]
    for i, j in itertools.product(range(16), repeat=2):
        d = mx.is_disjoint(a[i], a[j])
        assert d == mx.is_disjoint(a[j], a[i])
        assert d == cellwise_disjoint(pis[i], pis[j])
        if i == j:
            assert not d
        if not d and i != j:
            shared = sum(pis[i].grid[s][t] == pis[j].grid[s][t] for s in range(2) for t in range(2))
            assert shared >= 1


def test_fingerprint_sampled_n3():
    table = mx.symbol_table(3)
    rng = random.Random(1)
    for _ in range(5000):
        u, v = rng.randrange(len(table)), rng.randrange(len(table))
        x = mx.SPermutationMatrix.from_symbols(3, table[u])
        y = mx.SPermutationMatrix.from_symbols(3, table[v])
        assert mx.is_disjoint(x, y) == cellwise_disjoint(mx.sperm_to_pi(x), mx.sperm_to_pi(y))
        assert mx.is_disjoint(x, y) == mx.is_disjoint(y, x)


def test_fingerprint_words_match_python_ints():
    table = mx.symbol_table(3)
    words = mx.fingerprint_words(table[:200], 3)
    assert words.shape == (200, 2)
    for v in range(200):
        fp = mx.SPermutationMatrix.from_symbols(3, table[v]).fingerprint
        assert int(words[v, 0]) | (int(words[v, 1]) << 64) == fp


def test_raw_enumeration_oracle_n2():
    raw = raw_s_permutation_matrices(2)
    assert len(raw) == 16
    disjoint = sum(1 for x in raw for y in raw if not x & y)
    assert disjoint == mx.brute_force_disjoint_count(2) == 112


def test_brute_force_counts():
    assert mx.brute_force_disjoint_count(1) == 0
    with pytest.raises(FeasibilityError):
        mx.brute_force_disjoint_count(4)


def test_brute_force_n2_matches_formula():
    assert mx.brute_force_disjoint_count(2) == formulas.disjoint_ordered(2)


def test_brute_force_n3_matches_formula(brute3):
    assert brute3 == formulas.disjoint_ordered(3)


def test_brute_force_matches_orbit_formula(brute3):
    assert mx.brute_force_disjoint_count(2) == formulas.orbit_disjoint_ordered(2)
    assert brute3 == formulas.orbit_disjoint_ordered(3) == 838_501_632


def test_histogram_n2():
    hist = mx.agreement_histogram(2)
    assert hist == [112, 64, 64, 0, 16]
    assert hist[0] == mx.brute_force_disjoint_count(2)
    assert hist[4] == 16
    assert sum(hist) == 256


def test_histogram_n3_invariants(hist3, brute3):
    assert sum(hist3) == math.factorial(3) ** 12
    assert hist3[0] == brute3
    assert hist3[9] == 46_656


def test_oracles_independent_of_jobs():
    assert mx.brute_force_disjoint_count(2, jobs=1) == mx.brute_force_disjoint_count(2, jobs=4)
    assert mx.agreement_histogram(2, jobs=1) == mx.agreement_histogram(2, jobs=4)


@pytest.mark.parametrize("n", [2, 3])
def test_q_oracle_matches_formula(n, hist3):
    hist = mx.agreement_histogram(2) if n == 2 else hist3
    assert [mx.q_oracle(hist, k) for k in range(n * n + 1)] == [
        formulas.q_count(n, k) for k in range(n * n + 1)
    ]


@pytest.mark.parametrize("n", [2, 3])
def test_q_oracle_matches_orbit_formula(n, hist3):
    hist = mx.agreement_histogram(2) if n == 2 else hist3
    assert [mx.q_oracle(hist, k) for k in range(n * n + 1)] == [
        formulas.orbit_q_count(n, k) for k in range(n * n + 1)
    ]


def test_q_oracle_small_k():
    hist = mx.agreement_histogram(2)
    assert mx.q_oracle(hist, 0) == 256
    assert mx.q_oracle(hist, 1) == 256 == formulas.q_count(2, 1)
    assert mx.q_oracle(hist, 4) == 16 == formulas.q_count(2, 4)
