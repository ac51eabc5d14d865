import random
from fractions import Fraction

import pytest

from normcompat.catalogue import fixture_names, load_fixture
from normcompat.config import pair_from_dict
from normcompat.groups.roots import root_element_exact, root_system
from normcompat.linalg import ExactMatrix, Subspace
from normcompat.spherical import (check_condition_b, check_open_orbit, find_u, orbit_report,
                                  stabilizer_lie, torus_image)

WITH_U = [n for n in fixture_names() if load_fixture(n).pair.u is not None]


def _dims(rep):
    return rep.open, rep.stab_dim, rep.span_dim, rep.torus_image_dim


@pytest.mark.parametrize("name", WITH_U)
def test_fixture_claims(fixture_run, name):
    run = fixture_run(name)
    rep = orbit_report(run.pair, run.p)
    exp = run.expected
    assert rep.open == exp["open"]
    assert rep.stab_dim == exp["stab_dim"]
    assert rep.condition_b == exp["condition_b"]
    assert run.p not in rep.bad_primes


@pytest.mark.parametrize("name", WITH_U)
def test_rank_nullity(fixture_run, name):
    rep = check_open_orbit(fixture_run(name).pair)
    assert rep.span_dim + rep.stab_dim == rep.dim_q_h + rep.dim_qbar_g
    assert rep.flag_dim == rep.dim_g - rep.dim_qbar_g
    assert (rep.span_dim == rep.dim_g) == rep.open
    if rep.open:
        assert rep.stab_dim == rep.dim_q_h - rep.flag_dim


def test_rank_nullity_off_the_open_orbit(fixture_run):
    cfg = fixture_run("rankin-selberg").pair.with_u(ExactMatrix.identity(4))
    rep = check_open_orbit(cfg)
    assert not rep.open
    assert rep.span_dim + rep.stab_dim == rep.dim_q_h + rep.dim_qbar_g


def _block_pairs(n, m):
    """Oracle: vectors of gl_{2n} of the form diag(X, X) ... as flat lists."""
    size = 2 * n
    out = []
    for i in range(n):
        for j in range(n):
            v = [0] * size * size
            v[i * size + j] = 1
            v[(i + n) * size + (j + n)] = 1
            out.append(v)
    return out


@pytest.mark.parametrize("n", [1, 2])
def test_shalika_stabilizer_is_diagonal_pairs(fixture_run, n):
    cfg = fixture_run(f"gl2n-shalika-{n}").pair
    stab = stabilizer_lie(cfg)
    assert stab == Subspace(4 * n * n, _block_pairs(n, 2 * n))
    assert stab.dim == n * n


@pytest.mark.parametrize("n", [1, 2])
def test_borel_stabilizer_is_palindromic_diagonal(fixture_run, n):
    cfg = fixture_run(f"gl2n-borel-{n}").pair
    size = 2 * n
    want = []
    for i in range(n):
        v = [0] * size * size
        v[i * (size + 1)] = 1
        v[(size - 1 - i) * (size + 1)] = 1
        want.append(v)
    assert stabilizer_lie(cfg) == Subspace(size * size, want)


def test_shalika_torus_image():
    run = load_fixture("gl2n-shalika-1")
    ti = torus_image(run.pair)
    assert ti["proper"]
    assert ti["image_dim"] < ti["lie_c_dim"]
    # det(h1)/det(h2) up to sign of the exponent vector
    assert [str(c) for c in ti["vanishing_characters"]] == ["det[0]^-1*det[1]^1"]


def test_vanishing_character_kills_stabilizer():
    # d(det h1 - det h2) = tr X1 - tr X2 vanishes on (X, X)
    run = load_fixture("gl2n-shalika-2")
    cfg = run.pair
    ti = torus_image(cfg)
    assert ti["proper"] and len(ti["vanishing_characters"]) == 1
    rep = check_open_orbit(cfg)
    for v in rep.stabilizer_h.basis:
        x = list(v)
        n = 2
        tr1 = sum(x[i * 4 + i] for i in range(n))
        tr2 = sum(x[i * 4 + i] for i in range(n, 2 * n))
        assert tr1 == tr2


def test_gsp6_borel_dimension_obstruction():
    run = load_fixture("gsp6-borel")
    res = find_u(run.pair, p=2)
    assert res.status == "dimension-obstruction" and res.u is None
    assert "8 < 9" in res.reason


def _trivial_pair():
    return pair_from_dict({
        "h": {"type": "GL", "n": 2}, "g": {"type": "GL", "n": 2},
        "embedding": [{"kind": "block", "source": [0, 1], "target": [0, 1]}],
        "eta_g": [0, 0],
        "mirabolic_h": {"eta": [0, 0], "levi_sub": {"kind": "full"}},
        "levi_sub_g": {"kind": "full"},
        "u": [["1", "0"], ["0", "1"]],
    })


def test_trivial_pair():
    cfg = _trivial_pair()
    rep = check_open_orbit(cfg)
    assert rep.open and rep.flag_dim == 0 and rep.stab_dim == 4
    assert stabilizer_lie(cfg) == Subspace.full(4)
    res = find_u(cfg.with_u(None), p=3)
    assert res.status == "found" and res.u == ExactMatrix.identity(2) and res.tried == 1


def test_condition_b_examples(fixture_run):
    for name in ("rankin-selberg", "gsp4-siegel"):
        run = fixture_run(name)
        out = check_condition_b(run.pair, run.p, 1)
        assert out["lie_ok"] and out["points_ok"]


def test_condition_b_monotone_in_levi(fixture_run):
    from normcompat.groups import LeviSub
    for name in WITH_U:
        cfg = fixture_run(name).pair
        small = check_condition_b(cfg, cfg.p or 2, 1)["lie_ok"]
        big = cfg.__class__(cfg.h, cfg.g, cfg.emb, cfg.eta_g, cfg.mirab_h, LeviSub.full(),
                            cfg.u, cfg.p)
        assert check_condition_b(big, cfg.p or 2, 1)["lie_ok"] or not small
        assert check_condition_b(big, cfg.p or 2, 1)["lie_ok"]


def _word(group, eta, keep, rng, n):
    x = ExactMatrix.identity(n)
    roots = [a for a in root_system(group, eta) if keep(a.weight)]
    for _ in range(4):
        a = rng.choice(roots)
        x = x * ExactMatrix.from_flat(root_element_exact(a, rng.randint(-3, 3), n), n)
    return x


@pytest.mark.parametrize("name", ["rankin-selberg", "gl2n-shalika-1", "gl3-gl1", "gsp4-siegel",
                                  "modular-symbol"])
def test_orbit_invariance(fixture_run, name):
    cfg = fixture_run(name).pair
    rng = random.Random(3)
    base = orbit_report(cfg, points=False)
    full_levi = cfg.mirab_h.levi_sub.kind == "full"
    for _ in range(5):
        q = _word(cfg.h, cfg.mirab_h.eta, lambda w: w > 0 or (w == 0 and full_levi), rng, cfg.h.n) \
            if any(a.weight > 0 or (a.weight == 0 and full_levi)
                   for a in root_system(cfg.h, cfg.mirab_h.eta)) else ExactMatrix.identity(cfg.h.n)
        qbar = _word(cfg.g, cfg.eta_g, lambda w: w <= 0, rng, cfg.g.n)
        moved = cfg.with_u(cfg.emb.apply(q) * cfg.u * qbar)
        rep = orbit_report(moved, points=False)
        assert (rep.open, rep.stab_dim, rep.torus_image_dim) == \
            (base.open, base.stab_dim, base.torus_image_dim)


def test_find_u_rankin_selberg_same_orbit(fixture_run):
    run = fixture_run("rankin-selberg")
    res = find_u(run.pair.with_u(None), p=2)
    assert res.status == "found"
    found = check_open_orbit(run.pair.with_u(res.u, 2)).summary()
    shipped = check_open_orbit(run.pair).summary()
    assert found == shipped


def test_find_u_random_deterministic(fixture_run):
    cfg = fixture_run("gl2n-shalika-1").pair.with_u(None)
    a = find_u(cfg, "random", p=2, seed=5)
    b = find_u(cfg, "random", p=2, seed=5)
    assert a.status == "found" and a.u == b.u and a.tried == b.tried


def test_find_u_budget_is_not_a_proof(fixture_run):
    cfg = fixture_run("rankin-selberg").pair.with_u(None)
    res = find_u(cfg, "candidates", p=2, candidates=[ExactMatrix.identity(4)])
    assert res.status == "budget-exhausted" and "not a proof" in res.reason


def test_u_must_be_integral(fixture_run):
    cfg = fixture_run("rankin-selberg").pair
    flat = list(ExactMatrix.identity(4).flat())
    flat[1] = Fraction(1, 2)
    bad = ExactMatrix.from_flat(flat, 4)
    with pytest.raises(ValueError):
        cfg.with_u(bad, 2)
