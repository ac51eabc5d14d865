import itertools
import random
from fractions import Fraction

import pytest

from normcompat import residue as R
from normcompat.groups import GL, Cocharacter, GSp, LeviSub, group_points_mod, \
    standard_symplectic_form
from normcompat.levels import (LevelDescriptor, coset_reps, coset_reps_n, iwahori_factor,
                               level_contains, level_index, verify_lemma)
from normcompat.linalg import ExactMatrix, vp
from normcompat.mackey import index_of


def gl2_level(r, variant="U", p=3):
    return LevelDescriptor(GL(2), Cocharacter((1, 0)), r, variant, LeviSub.trivial(), p)


def conj(g, p, s):
    """tau^{-s} g tau^{s} for tau = diag(p, 1)."""
    eta = (1, 0)
    return [[Fraction(g[i][j]) * Fraction(p) ** (s * (eta[j] - eta[i])) for j in range(2)]
            for i in range(2)]


def in_U_oracle(g, p, r):
    """tau^{-r} g tau^r integral, g in GL_2(Z_p), g mod p^r lower unipotent-diagonal."""
    g = [[Fraction(x) for x in row] for row in g]
    if any(vp(x, p) is not None and vp(x, p) < 0 for row in g for x in row):
        return False
    if vp(g[0][0] * g[1][1] - g[0][1] * g[1][0], p) != 0:
        return False
    c = conj(g, p, r)
    if any(vp(x, p) is not None and vp(x, p) < 0 for row in c for x in row):
        return False
    q = p ** r
    ok = lambda x, t: vp(x - t, p) is None or vp(x - t, p) >= r
    return ok(g[0][0], 1) and ok(g[1][1], 1) and ok(g[0][1], 0) and q > 0


def test_identity_in_every_level():
    for variant in ("U", "Uprime", "V", "J"):
        for r in (0, 1, 2):
            assert level_contains(ExactMatrix.identity(2), gl2_level(r, variant))


def test_gl2_membership_examples():
    U1 = gl2_level(1)
    rng = random.Random(0)
    for _ in range(50):
        a, b, c, d = (rng.randint(-20, 20) for _ in range(4))
        g = [[1 + 3 * a, 3 * b], [c, 1 + 3 * d]]
        assert level_contains(ExactMatrix(g), U1) == in_U_oracle(g, 3, 1) is True
    assert not level_contains(ExactMatrix([[1, 1], [0, 1]]), U1)
    assert level_contains(ExactMatrix([[1, 0], [3, 1]]), gl2_level(1, "V"))


def test_membership_matches_conjugation_oracle():
    rng = random.Random(1)
    for _ in range(400):
        p = rng.choice([2, 3])
        r = rng.randint(1, 2)
        g = [[Fraction(rng.randint(-9, 9) * p ** rng.randint(0, 2), rng.choice([1, 1, 1, p]))
              for _ in range(2)] for _ in range(2)]
        if g[0][0] * g[1][1] == g[0][1] * g[1][0]:
            continue
        assert level_contains(ExactMatrix(g), gl2_level(r, "U", p)) == in_U_oracle(g, p, r)
        # V_r = tau^{-r} U_r tau^r
        back = conj(g, p, -r)
        assert level_contains(ExactMatrix(g), gl2_level(r, "V", p)) == in_U_oracle(back, p, r)


def test_tower_containments_on_points():
    p, D = 2, 3
    pts = group_points_mod(GL(2), p, D)
    U1, U1p, U2 = gl2_level(1, "U", p), gl2_level(1, "Uprime", p), gl2_level(2, "U", p)
    for x in pts:
        a = U1.contains_residue(x, D)
        b = U1p.contains_residue(x, D)
        c = U2.contains_residue(x, D)
        assert (not c or b) and (not b or a)
        # U_1' = U_1 ∩ tau U_1 tau^{-1}
        g = ExactMatrix.from_flat(list(x), 2)
        in_conj = U1.contains(ExactMatrix(conj(g.rows_list(), p, 1)))
        assert b == (a and in_conj)


def test_iwahori_factor_recomposes():
    U1 = gl2_level(1)
    rng = random.Random(2)
    for _ in range(30):
        a, b, c, d = (rng.randint(-20, 20) for _ in range(4))
        g = ExactMatrix([[1 + 3 * a, 3 * b], [c, 1 + 3 * d]])
        f = iwahori_factor(g, U1)
        assert f.recompose() == g
        assert f.nbar.flat()[1] == 0 and f.n.flat()[2] == 0
        assert f.nbar.flat()[0] == f.nbar.flat()[3] == 1 == f.n.flat()[0] == f.n.flat()[3]
        assert vp(f.n.flat()[1], 3) is None or vp(f.n.flat()[1], 3) >= 1
    assert iwahori_factor(ExactMatrix.identity(2), U1).recompose() == ExactMatrix.identity(2)
    with pytest.raises(ValueError):
        iwahori_factor(ExactMatrix([[1, 1], [0, 1]]), U1)


def test_iwahori_factor_unique_mod_p2():
    p, m = 3, 9
    g = ExactMatrix([[4, 3], [5, 7 + 9]])
    f = iwahori_factor(g, gl2_level(1))
    target = R.from_rational(g.flat(), p, m)
    found = []
    for c, a, d, b in itertools.product(range(m), range(1, m, 3), range(1, m, 3), range(0, m, 3)):
        x = R.prod(((1, 0, c, 1), (a, 0, 0, d), (1, b, 0, 1)), 2, m)
        if x == target:
            found.append((c, a, d, b))
    want = tuple(R.from_rational([f.nbar.flat()[2], f.l.flat()[0], f.l.flat()[3],
                                  f.n.flat()[1]], p, m))
    assert found == [want]


def test_coset_reps_n_counts():
    reps = coset_reps_n(gl2_level(1), 1, 2)
    assert sorted(x.flat()[1] for x in reps) == [0, 3, 6]
    assert all(x.flat()[0] == x.flat()[3] == 1 and x.flat()[2] == 0 for x in reps)
    sieg = LevelDescriptor(GSp(standard_symplectic_form(2)), Cocharacter((1, 1, 0, 0)), 1, "U",
                           LeviSub.trivial(), 2)
    assert len(coset_reps_n(sieg, 1, 2)) == 8
    flat = LevelDescriptor(GL(2), Cocharacter((0, 0)), 1, "U", LeviSub.trivial(), 3)
    assert coset_reps_n(flat, 1, 2) == [ExactMatrix.identity(2)]


def test_coset_reps_n_cover_and_disjoint():
    p, r = 3, 1
    reps = coset_reps_n(gl2_level(r), r, r + 1)
    m = p ** 3
    for t in range(0, m, p ** r):
        x = (1, t, 0, 1)
        hits = [rho for rho in reps
                if R.mul(R.inv(R.from_rational(rho.flat(), p, m), 2, p, m), x, 2, m)[1]
                % p ** (r + 1) == 0]
        assert len(hits) == 1


def _count_mod(p, D, test):
    m = p ** D
    total = 0
    for f in itertools.product(range(m), repeat=4):
        if (f[0] * f[3] - f[1] * f[2]) % p and test(f, m):
            total += 1
    return total


@pytest.mark.parametrize("p, r, D", [(2, 1, 1), (2, 2, 2), (3, 1, 1), (3, 2, 2)])
def test_index_without_iwahori_decomposition(p, r, D):
    U0, Ur = gl2_level(0, "U", p), gl2_level(r, "U", p)
    assert not U0.has_iwahori
    with pytest.raises(ValueError):
        level_index(U0, Ur)
    q = p ** r
    whole = _count_mod(p, D, lambda f, m: True)
    sub = _count_mod(p, D, lambda f, m: f[1] % q == 0 and (f[0] - 1) % q == 0
                     and (f[3] - 1) % q == 0)
    assert index_of(U0, Ur) == whole // sub


def test_coset_reps_match_level_index():
    V, U = gl2_level(1, "U", 2), gl2_level(2, "U", 2)
    reps = coset_reps(V, U, 3)
    assert len(reps) == level_index(V, U) == index_of(V, U)


@pytest.mark.parametrize("name, p, index", [
    ("modular-symbol", 3, 3), ("rankin-selberg", 2, 4), ("rankin-selberg", 3, 9),
    ("gl2n-shalika-1", 2, 2), ("gl2n-borel-1", 2, 2),
])
def test_lemma(fixture_run, name, p, index):
    out = verify_lemma(fixture_run(name, p=p).pair, p, 1)
    assert out["part_i"] and out["part_ii"] and out["guard"]["agrees"]
    assert out["index"] == out["expected_index"] == index
    assert None not in out["representatives"]


def test_lemma_fails_without_open_orbit(fixture_run):
    cfg = fixture_run("rankin-selberg", p=2).pair.with_u(ExactMatrix.identity(4), 2)
    out = verify_lemma(cfg, 2, 1)
    assert not out["part_ii"] and out["witnesses"]["part_ii"]["uncovered_reps"]
