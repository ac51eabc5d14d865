"""Classification data for spherical pairs and the shipped example configurations."""

from dataclasses import dataclass
from importlib import resources

from .entries import (EISENSTEIN_CONFIGS, EISENSTEIN_OUTCOMES, FAMILY_TEMPLATES, SPORADIC,
                      CatalogueEntry, FamilyTemplate, LieFactor, normalize, sl, so, sp)

FAMILY_RANGE = range(2, 7)
FILTERS = ("all", "none", "eisenstein", "has-torus-factor")


def check_entry(e):
    dim_h = sum(f.dim for f in e.h_factors)
    dim_flag = sum(f.flag_dim for f in e.g_factors)
    return {"ok": dim_h == dim_flag, "dim_h": dim_h, "dim_flag_g": dim_flag}


def instances(ns=FAMILY_RANGE):
    """Every family at each n in ``ns`` followed by the sporadic entries."""
    return [t.at(n) for t in FAMILY_TEMPLATES for n in ns] + list(SPORADIC)


@dataclass
class EisensteinMatch:
    entry: CatalogueEntry
    k: int
    g_prime: list
    h_prime: list
    outcome: str = None
    config: str = None

    def to_dict(self):
        return {"entry": self.entry.name, "k": self.k,
                "g_prime": [str(f) for f in self.g_prime],
                "h_prime": [str(f) for f in self.h_prime],
                "outcome": self.outcome, "config": self.config}


def _remove(factors, f, k):
    out = list(factors)
    for _ in range(k):
        out.remove(f)
    return out


def eisenstein_matches(ns=FAMILY_RANGE):
    """Entries with g = g' x sl_2^k and h = h' x sl_2^k (k >= 1), after normalization."""
    out = []
    for e in instances(ns):
        g, h = normalize(e.g_factors), normalize(e.h_factors)
        top = min(g.count(sl(2)), h.count(sl(2)))
        for k in range(1, top + 1):
            gp, hp = _remove(g, sl(2), k), _remove(h, sl(2), k)
            name = next((o for o, fs in EISENSTEIN_OUTCOMES.items() if sorted(fs) == gp), None)
            out.append(EisensteinMatch(e, k, gp, hp, name, EISENSTEIN_CONFIGS.get(name)))
    return out


def list_catalogue(filter="all"):
    """``all``/``none``: 8 family templates then 12 sporadic entries;
    ``eisenstein``: EisensteinMatch records; ``has-torus-factor``: templates
    and entries with t among the h factors."""
    if filter in ("all", "none"):
        return list(FAMILY_TEMPLATES) + list(SPORADIC)
    if filter == "eisenstein":
        return eisenstein_matches()
    if filter == "has-torus-factor":
        return [t for t in FAMILY_TEMPLATES if t.has_torus] + [
            e for e in SPORADIC if any(f.family == "t" for f in e.h_factors)]
    raise ValueError(f"unknown filter {filter!r}; expected one of {FILTERS}")


def data_path(name):
    return resources.files(__name__) / "data" / f"{name}.config"


def fixture_names():
    return sorted(p.name[:-len(".config")] for p in (resources.files(__name__) / "data").iterdir()
                  if p.name.endswith(".config"))


def load_fixture(name, **overrides):
    from ..config import run_from_dict, parse_text
    text = data_path(name).read_text(encoding="utf-8")
    return run_from_dict(parse_text(text, f"{name}.config"), **overrides)


__all__ = [
    "LieFactor", "CatalogueEntry", "FamilyTemplate", "EisensteinMatch", "check_entry",
    "list_catalogue", "instances", "eisenstein_matches", "normalize", "sl", "so", "sp",
    "FAMILY_TEMPLATES", "SPORADIC", "EISENSTEIN_OUTCOMES", "load_fixture", "fixture_names",
    "data_path",
]
