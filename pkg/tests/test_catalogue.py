import pytest

from normcompat.catalogue import (EISENSTEIN_OUTCOMES, FAMILY_TEMPLATES, SPORADIC, LieFactor,
                                  check_entry, eisenstein_matches, fixture_names, instances,
                                  list_catalogue, load_fixture, normalize, sl, so, sp)

# number of positive roots, counted from the root systems
POSITIVE_ROOTS = {"e6": 36, "e7": 63, "e8": 120, "f4": 24, "g2": 6}


def positive_roots(f):
    if f.family == "sl":
        return f.n * (f.n - 1) // 2
    if f.family == "sp":
        return (f.n // 2) ** 2
    if f.family == "so":
        k = f.n // 2
        return k * k if f.n % 2 else k * (k - 1)
    if f.family == "t":
        return 0
    return POSITIVE_ROOTS[f.family]


@pytest.mark.parametrize("f", [sl(2), sl(5), so(3), so(4), so(7), so(8), sp(2), sp(6),
                               LieFactor("t")] + [LieFactor(x) for x in POSITIVE_ROOTS])
def test_flag_dim_counts_positive_roots(f):
    assert f.flag_dim == positive_roots(f)
    assert f.dim == 2 * positive_roots(f) + f.rank


def test_catalogue_sizes():
    assert len(FAMILY_TEMPLATES) == 8 and len(SPORADIC) == 12
    assert len(instances()) == 8 * 5 + 12
    assert len(list_catalogue("all")) == 20 == len(list_catalogue("none"))


@pytest.mark.parametrize("entry", instances(), ids=lambda e: e.name)
def test_every_entry_balances(entry):
    res = check_entry(entry)
    assert res["ok"]
    assert res["dim_h"] == sum(positive_roots(f) for f in entry.g_factors)


def test_check_entry_detects_mismatch():
    from normcompat.catalogue import CatalogueEntry
    bad = CatalogueEntry("x", [sl(3)], [sl(3)], "sporadic")
    assert check_entry(bad) == {"ok": False, "dim_h": 8, "dim_flag_g": 3}


def test_normalize_coincidences():
    assert normalize([so(3)]) == [sl(2)]
    assert normalize([sp(2)]) == [sl(2)]
    assert normalize([so(4)]) == [sl(2), sl(2)]
    assert normalize([so(5)]) == [sp(4)]
    assert normalize([so(6)]) == [sl(4)]
    assert normalize([so(2)]) == [LieFactor("t")]
    assert normalize([sl(1), so(1)]) == []


def test_bad_factors():
    with pytest.raises(ValueError):
        LieFactor("sp", 3)
    with pytest.raises(ValueError):
        LieFactor("a5", 2)


def test_eisenstein_filter_outcomes():
    matches = list_catalogue("eisenstein")
    assert sorted(m.outcome for m in matches) == sorted(EISENSTEIN_OUTCOMES)
    assert all(m.k >= 1 for m in matches)
    for m in matches:
        g, h = normalize(m.entry.g_factors), normalize(m.entry.h_factors)
        assert sorted(m.g_prime + [sl(2)] * m.k) == g
        assert sorted(m.h_prime + [sl(2)] * m.k) == h


def test_eisenstein_linked_configs_exist():
    names = set(fixture_names())
    for m in eisenstein_matches():
        if m.config:
            assert m.config in names


def test_torus_filter():
    got = list_catalogue("has-torus-factor")
    assert got
    for x in got:
        factors = x.at(2).h_factors if hasattr(x, "at") else x.h_factors
        assert any(f.family == "t" for f in factors)
    with pytest.raises(ValueError):
        list_catalogue("bogus")


def test_shipped_configs_load():
    for name in fixture_names():
        run = load_fixture(name)
        assert run.pair.name == name
        assert run.digest and len(run.digest) == 64
