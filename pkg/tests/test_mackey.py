import itertools
import random

import pytest

from normcompat import residue as R
from normcompat.groups import GL, Cocharacter, LeviSub
from normcompat.groups.roots import root_system
from normcompat.levels import LevelDescriptor
from normcompat.linalg import ExactMatrix
from normcompat.mackey import (CompactClass, ContainmentError, Coset, index_of, pullback,
                               pushforward)
from normcompat.mackey.cartesian import cartesian_check, random_class
from normcompat.mackey.machine import (CompatibleFamily, delta_family, family_check, hecke_t,
                                       level, orbit_class, verify_decomposition,
                                       verify_norm_relation, working_precision)
from normcompat.mackey.ordinary import ordinary_projector, projector_properties


def gl2(r, variant="U", p=2, **kw):
    return LevelDescriptor(GL(2), Cocharacter((1, 0)), r, variant, LeviSub.trivial(), p, **kw)


def random_cosets(lv, prec, count, rng, es=((0, 0),)):
    out = []
    m = lv.p ** prec
    while len(out) < count:
        k = tuple(rng.randrange(m) for _ in range(4))
        if (k[0] * k[3] - k[1] * k[2]) % lv.p:
            out.append(Coset(k, rng.choice(es), lv, prec))
    return out


def same_oracle(x, y):
    """xU = yU iff x^{-1} y in U, decided on rational lifts."""
    return x.level.contains(x.rep.inverse() * y.rep)


def test_coset_equality_matches_membership():
    rng = random.Random(0)
    U = gl2(1)
    cs = random_cosets(U, 4, 40, rng, es=((0, 0), (1, 0), (0, 1)))
    # add translates by level elements so that equal pairs occur
    extra = [c.translate_residue((1, 0, 2 * rng.randrange(8), 1), U, 4) for c in cs[:10]]
    cs += extra
    for a, b in itertools.product(cs, repeat=2):
        assert a.same(b) == same_oracle(a, b)


def test_index_dedup_matches_pairwise():
    rng = random.Random(1)
    U = gl2(2, "U", 3)
    cs = random_cosets(U, 4, 60, rng)
    cs += [c.translate_residue((1 + 9 * rng.randrange(9), 0, rng.randrange(81), 1), U, 4)
           for c in cs[:30]]
    brute = []
    for c in cs:
        if not any(c.same(d) for d in brute):
            brute.append(c)
    assert len(CompactClass(U, [(c, 1) for c in cs])) == len(brute)


def test_collision_merges():
    U = gl2(1)
    x = Coset.identity(U, 3)
    y = x.translate_residue((1, 0, 1, 1), U, 3)   # lower unipotent lies in U_1
    c = CompactClass(U, [(x, 1), (y, 1)])
    assert len(c) == 1 and c.terms[0][1] == 2
    assert CompactClass(U, [(x, 1), (y, -1)]).is_zero()
    assert CompactClass(U, [(x, 3)], modulus=3).is_zero()


def test_pushforward_functorial():
    rng = random.Random(2)
    U2, U1, U0 = gl2(2), gl2(1), gl2(0)
    for _ in range(5):
        c = random_class(U2, 4, rng)
        assert pushforward(pushforward(c, None, U1), None, U0) == pushforward(c, None, U0)
        assert pushforward(c, None, U2) == c
    with pytest.raises(ContainmentError):
        pushforward(CompactClass.delta(Coset.identity(U1, 3)), None, U2)


def test_pushforward_by_tau():
    p = 2
    U1, V1 = gl2(1, "U", p), gl2(1, "V", p)
    tau = ExactMatrix([[p, 0], [0, 1]])
    c = CompactClass.delta(Coset.identity(U1, 4))
    out = pushforward(c, tau, V1)
    assert len(out) == 1 and out.terms[0][0].rep == tau
    with pytest.raises(ContainmentError):
        pushforward(c, tau.inverse(), V1)


@pytest.mark.parametrize("p", [2, 3])
def test_pushforward_pullback_is_index(p):
    rng = random.Random(p)
    for V, U in ((gl2(1, "U", p), gl2(1, "Uprime", p)), (gl2(1, "U", p), gl2(2, "U", p)),
                 (gl2(0, "U", p), gl2(1, "U", p))):
        c = random_class(V, 4, rng)
        back = pushforward(pullback(c, U), None, V)
        assert back == c.scale(index_of(V, U))


def test_pullback_to_uprime_counts():
    U1, U1p = gl2(1), gl2(1, "Uprime")
    out = pullback(CompactClass.delta(Coset.identity(U1, 3)), U1p)
    assert len(out) == 2 and all(a == 1 for _, a in out)
    assert pullback(CompactClass.zero(U1), U1p).is_zero()


@pytest.mark.parametrize("name, r", [("rankin-selberg", 1), ("modular-symbol", 1),
                                     ("gl2n-shalika-1", 2)])
def test_orbit_methods_agree(fixture_run, name, r):
    cfg = fixture_run(name).pair
    a = orbit_class(cfg, r, method="enumerate")
    b = orbit_class(cfg, r, method="orbit")
    assert a == b and all(x == 1 for _, x in a)


def test_orbit_class_is_left_invariant(fixture_run):
    from normcompat.levels import mirabolic_generators
    cfg = fixture_run("rankin-selberg").pair
    z = orbit_class(cfg, 1)
    p, prec = cfg.p, z.terms[0][0].prec
    m = p ** prec
    for g in mirabolic_generators(cfg.mirab_h, p):
        gi = cfg.emb.image_flat(R.from_rational(g, p, m), p, m)
        assert CompactClass(z.level, [(c.left(gi), a) for c, a in z]) == z


def test_hecke_on_zero_and_linearity(fixture_run):
    cfg = fixture_run("modular-symbol").pair
    V = level(cfg, 3, 1, "V")
    assert hecke_t(CompactClass.zero(V)).is_zero()
    rng = random.Random(4)
    a, b = random_class(V, 5, rng), random_class(V, 5, rng)
    assert hecke_t(a + b) == hecke_t(a) + hecke_t(b)
    assert hecke_t(CompactClass.delta(Coset.identity(V, 5))).mass == 3


@pytest.mark.parametrize("name", ["modular-symbol", "rankin-selberg"])
def test_hecke_commutes_with_pushforward(fixture_run, name):
    run = fixture_run(name)
    cfg, p = run.pair, run.p
    V2, V1 = level(cfg, p, 2, "V"), level(cfg, p, 1, "V")
    prec = working_precision(cfg, p, 2)
    rng = random.Random(5)
    for _ in range(20):
        c = random_class(V2, prec, rng)
        assert pushforward(hecke_t(c), None, V1) == hecke_t(pushforward(c, None, V1))


@pytest.mark.parametrize("name", ["modular-symbol", "rankin-selberg", "gl2n-shalika-1"])
def test_decomposition(fixture_run, name):
    run = fixture_run(name)
    for r in (1, 2):
        out = verify_decomposition(level(run.pair, run.p, r, "V"))
        assert out["disjoint"] and out["covering"]
        # |N_0/N_1| = p^(sum of the positive weights over root spaces)
        spaces = [a for a in root_system(run.pair.g, run.pair.eta_g) if a.weight > 0]
        assert out["count"] == run.p ** sum(a.weight for a in spaces)


def test_norm_relation_fault_injection(fixture_run):
    cfg = fixture_run("rankin-selberg").pair
    bad = verify_norm_relation(cfg, 2, 1, check_hypotheses=False, u=ExactMatrix.identity(4))
    assert bad.status == "fail" and not bad.holds and bad.witness
    gated = verify_norm_relation(cfg.with_u(ExactMatrix.identity(4)), 2, 1)
    assert gated.status == "hypotheses-unmet" and gated.hypotheses["open"] is False


def test_norm_relation_modular_symbol(fixture_run):
    res = verify_norm_relation(fixture_run("modular-symbol").pair, 3, 1)
    assert res.status == "pass" and res.holds and res.square


def test_delta_family_and_corruption():
    fam = delta_family(gl2(0, "U", 3), 3)
    check = family_check(fam)
    assert check.ok and check.checked == [0, 1, 2]
    broken = dict(fam.levels)
    broken[2] = broken[2].scale(2)
    bad = family_check(CompatibleFamily(broken, fam.r_max))
    assert not bad.ok and bad.failing_r == 1


def test_cartesian_small():
    for p in (2, 3):
        U, Up, V = gl2(2, "U", p), gl2(1, "Uprime", p), gl2(1, "U", p)
        assert cartesian_check(U, Up, V, samples=5)
        assert not cartesian_check(U, Up, V, samples=5, drop_gamma=0)


def _limit_power(t, n, m, steps=14):
    e = t
    for k in range(2, steps):
        out = tuple(int(i % (n + 1) == 0) for i in range(n * n))
        for _ in range(k):
            out = R.mul(out, e, n, m)
        e = out
    return e


def test_ordinary_projector_examples():
    e = ordinary_projector([[1, 0], [0, 2]], 2, 2)
    assert list(e.flat()) == [1, 0, 0, 0]
    assert list(ordinary_projector([[0, 1], [0, 0]], 3, 2).flat()) == [0, 0, 0, 0]
    assert list(ordinary_projector([[2, 1], [1, 1]], 5, 3).flat()) == [1, 0, 0, 1]
    with pytest.raises(ValueError):
        ordinary_projector([[1, 2], [3, 4]])


def test_ordinary_projector_matches_long_power():
    rng = random.Random(6)
    for _ in range(30):
        p, M = rng.choice([2, 3]), 2
        m = p ** M
        t = [[rng.randrange(m) for _ in range(2)] for _ in range(2)]
        e = ordinary_projector(t, p, M)
        # t^{13!} is past every stabilization point for 2x2 matrices mod p^2
        assert tuple(e.flat()) == _limit_power(tuple(x for row in t for x in row), 2, m)
        props = projector_properties(ExactMatrix(t, (p, M)), e)
        assert all(props.values())
