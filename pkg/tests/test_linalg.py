import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normcompat.linalg import (DimensionMismatch, ExactMatrix, NotInvertible, RingMismatch,
                               Subspace, integral_degeneracy_primes, nullspace, rank,
                               rank_mod_p, rref, rref_rank, smith_invariants, subspace_ops, vp)


def bareiss_rank(rows):
    """Fraction-free elimination on integer-scaled rows."""
    a = []
    for r in rows:
        den = math.lcm(*(Fraction(x).denominator for x in r))
        a.append([int(Fraction(x) * den) for x in r])
    if not a:
        return 0
    m, n = len(a), len(a[0])
    rk, prev = 0, 1
    for c in range(n):
        piv = next((i for i in range(rk, m) if a[i][c]), None)
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        for i in range(rk + 1, m):
            for j in range(c + 1, n):
                a[i][j] = (a[i][j] * a[rk][c] - a[i][c] * a[rk][j]) // prev
            a[i][c] = 0
        prev = a[rk][c]
        rk += 1
    return rk


def rand_rows(rng, m, n, lo=-3, hi=3, density=0.7):
    return [[Fraction(rng.randint(lo, hi), rng.randint(1, 3)) if rng.random() < density else 0
             for _ in range(n)] for _ in range(m)]


def test_rref_identity():
    red, rk, piv = rref_rank(ExactMatrix.identity(3))
    assert red == ExactMatrix.identity(3) and rk == 3 and piv == [0, 1, 2]


def test_rref_proportional_rows():
    red, rk, _ = rref_rank(ExactMatrix([[2, 4], [1, 2]]))
    assert rk == 1 and red == ExactMatrix([[1, 2], [0, 0]])


def test_rank_matches_bareiss_on_random_6x9():
    rng = random.Random(1)
    for _ in range(50):
        rows = rand_rows(rng, 6, 9, density=rng.choice([0.2, 0.5, 0.9]))
        assert rank(rows) == bareiss_rank(rows)


def test_rref_idempotent_and_row_space():
    rng = random.Random(2)
    for _ in range(30):
        rows = rand_rows(rng, 4, 6)
        red, piv = rref(rows)
        again, piv2 = rref(red)
        assert again == red and piv == piv2
        assert Subspace(6, rows) == Subspace(6, red[:len(piv)])


def test_nullspace_is_kernel():
    rng = random.Random(3)
    for _ in range(20):
        rows = rand_rows(rng, 3, 5)
        for v in nullspace(rows, 5):
            assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
        assert len(nullspace(rows, 5)) == 5 - rank(rows)


def test_subspace_full_and_equal():
    b = Subspace(4, [[1, 2, 0, 0], [0, 0, 1, 1]])
    ops = subspace_ops(Subspace.full(4), b)
    assert ops["sum"] == Subspace.full(4) and ops["intersection"] == b and ops["contains"]
    ops = subspace_ops(b, b)
    assert ops["sum"] == b == ops["intersection"]


def test_subspace_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        subspace_ops(Subspace.full(2), Subspace.full(3))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_dimension_formula(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    a = Subspace(n, rand_rows(rng, rng.randint(0, n), n))
    b = Subspace(n, rand_rows(rng, rng.randint(0, n), n))
    ops = subspace_ops(a, b)
    assert ops["sum"].dim + ops["intersection"].dim == a.dim + b.dim
    assert ops["contains"] == (ops["sum"] == a)


def test_degeneracy_primes():
    assert integral_degeneracy_primes(ExactMatrix.identity(3), 3) == set()
    assert integral_degeneracy_primes(ExactMatrix([[6, 0], [0, 1]]), 2) == {2, 3}
    assert integral_degeneracy_primes(ExactMatrix([[2]]), 1) == {2}


def test_degeneracy_primes_match_rank_drop():
    rng = random.Random(4)
    for _ in range(20):
        rows = [[rng.randint(-6, 6) for _ in range(4)] for _ in range(3)]
        rk = rank(rows)
        if rk == 0:
            continue
        bad = integral_degeneracy_primes(ExactMatrix(rows), rk)
        for p in (2, 3, 5, 7, 11, 13):
            assert (p in bad) == (rank_mod_p(rows, p) < rk)


def test_smith_invariants():
    assert smith_invariants(ExactMatrix([[2, 4], [6, 8]])) == [2, 4]


def test_residue_inverse_iff_unit_det():
    rng = random.Random(5)
    for _ in range(100):
        p, N = rng.choice([2, 3, 5]), rng.randint(1, 3)
        m = ExactMatrix([[rng.randrange(p ** N) for _ in range(3)] for _ in range(3)], (p, N))
        unit = m.det() % p != 0
        if unit:
            assert m * m.inverse() == ExactMatrix.identity(3, (p, N))
        else:
            with pytest.raises(NotInvertible):
                m.inverse()


def test_ring_tags_must_agree():
    with pytest.raises(RingMismatch):
        ExactMatrix([[1]], (3, 2)) * ExactMatrix([[1]])


def test_valuations():
    assert vp(Fraction(9, 4), 3) == 2 and vp(Fraction(9, 4), 2) == -2 and vp(0, 5) is None
