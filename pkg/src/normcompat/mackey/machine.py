"""Orbit classes, the Hecke operator T and the vertical norm relation.

z_r is the indicator of the orbit Q_H^0(Z_p) . u . U_r / U_r, and
xi_r = [tau^r]_* z_r lives at V_r = tau^{-r} U_r tau^r. On V_r-cosets

    T(delta_{y V_r}) = sum over gamma in N_0/N_1 of delta_{y gamma tau V_r},

and the relation checked is pushforward_{V_{r+1} -> V_r}(xi_{r+1}) = T xi_r,
together with the lower-left square pushforward_{U_{r+1} -> U_r'}(z_{r+1})
= pullback_{U_r -> U_r'}(z_r).
"""

import random
import threading
from dataclasses import dataclass, field

from .. import residue as R
from ..groups import BudgetExceeded
from ..levels import (LevelDescriptor, coset_reps_n, generators_residue,
                      mirabolic_generators)
from ..linalg import ExactMatrix
from .cosets import Coset, CompactClass, _Index, pullback, pushforward


class DecompositionError(RuntimeError):
    """V_r tau V_r is not the disjoint union of the gamma tau V_r."""


def level(cfg, p, r, variant="U"):
    return LevelDescriptor(cfg.g, cfg.eta_g, r, variant, cfg.levi_sub_g, p)


def working_precision(cfg, p, r):
    """Enough p-adic digits for every comparison made up to level r + 1."""
    eta = cfg.eta_g.eta
    spread = max(eta) - min(eta)
    depth = max(level(cfg, p, r + 1, v).depth for v in ("U", "Uprime", "V"))
    return depth + (r + 2) * spread + 1


def _unique(cosets):
    index = _Index()
    out = []
    for c in cosets:
        if index.find(c) is None:
            index.add(c, len(out))
            out.append(c)
    return out


def orbit_class(cfg, r, p=None, prec=None, budget=10 ** 6, u=None, method="auto"):
    """Indicator of Q_H^0(Z_p) u U_r / U_r, every coset with coefficient 1.

    ``enumerate`` maps every point of Q_H^0 mod p^depth; ``orbit`` runs a
    breadth-first search under generators of Q_H^0 and costs only the orbit
    size; ``auto`` enumerates when the point count fits the budget.
    """
    p = p if p is not None else cfg.p
    Ur = level(cfg, p, r)
    prec = prec or working_precision(cfg, p, r)
    u = cfg.u if u is None else (u if isinstance(u, ExactMatrix) else ExactMatrix(u))
    n, m = cfg.g.n, p ** prec
    ures = R.from_rational(u.flat(), p, m)
    d = max(Ur.depth, 1)
    sch = cfg.mirab_h.scheme
    if method == "auto":
        method = "enumerate" if sch.estimate(p, d) <= budget else "orbit"
    if method == "enumerate":
        cosets = []
        for q in sch.points(p, d, budget):
            lifted = sch.lift(q, d, prec, p) if prec > d else q
            x = R.mul(cfg.emb.image_flat(lifted, p, m), ures, n, m)
            cosets.append(Coset(x, (0,) * n, Ur, prec))
        found = _unique(cosets)
    elif method == "orbit":
        gens = [cfg.emb.image_flat(R.from_rational(x, p, m), p, m)
                for x in mirabolic_generators(cfg.mirab_h, p)]
        start = Coset(ures, (0,) * n, Ur, prec)
        index = _Index()
        index.add(start, 0)
        found = [start]
        i = 0
        while i < len(found):
            c = found[i]
            i += 1
            for g in gens:
                y = c.left(g)
                if index.find(y) is None:
                    index.add(y, len(found))
                    found.append(y)
                    if len(found) > budget:
                        raise BudgetExceeded(f"orbit exceeds {budget} cosets", budget)
    else:
        raise ValueError(f"unknown orbit method {method!r}")
    return CompactClass(Ur, [(c, 1) for c in found])


def shifted_class(cfg, r, z=None, p=None, prec=None, budget=10 ** 6):
    """xi_r = [tau^r]_* z_r at V_r."""
    p = p if p is not None else cfg.p
    z = z if z is not None else orbit_class(cfg, r, p, prec, budget)
    return pushforward(z, cfg.eta_g.tau(p, r), level(cfg, p, r, "V"))


# -- the Hecke operator ---------------------------------------------------------

_DECOMP_CACHE = {}
_DECOMP_LOCK = threading.Lock()


def hecke_reps(V):
    """gamma . tau for gamma in N_0/N_1, exact."""
    tau = V.eta.tau(V.p)
    return [g * tau for g in coset_reps_n(V, 0, 1)]


def verify_decomposition(V, prec=None, samples=20, seed=0):
    """V tau V = disjoint union of gamma tau V, checked on generators of V.

    The gamma tau V are pairwise distinct, and left multiplication by each
    topological generator of V permutes them; a random sample of longer words
    is checked as well. Results are cached per level (idempotent fills).
    """
    key = (V.key, prec)
    with _DECOMP_LOCK:
        hit = _DECOMP_CACHE.get(key)
    if hit is not None:
        return hit
    if V.shift or V.variant != "V" or V.r < 1:
        raise ValueError("the Hecke decomposition is defined at V_r, r >= 1")
    spread = max(V.eta.eta) - min(V.eta.eta)
    prec = prec or V.depth + 2 * spread + 2
    n, m = V.n, V.p ** prec
    start = Coset.identity(V, prec)
    cosets = [start.translate(g, V) for g in hecke_reps(V)]
    index = _Index()
    disjoint = True
    for i, c in enumerate(cosets):
        if index.find(c) is not None:
            disjoint = False
        index.add(c, i)
    gens = generators_residue(V, prec)
    rng = random.Random(seed)
    words = list(gens)
    for _ in range(samples):
        w = R.identity(n)
        for _ in range(6):
            w = R.mul(w, rng.choice(gens), n, m)
        words.append(w)
    covering = all(index.find(c.left(g)) is not None for g in words for c in cosets)
    out = {"count": len(cosets), "disjoint": disjoint, "covering": covering,
           "generators": len(gens), "words": len(words) - len(gens)}
    with _DECOMP_LOCK:
        _DECOMP_CACHE.setdefault(key, out)
    return out


def hecke_t(c, verify=True):
    V = c.level
    if V.variant != "V" or V.shift or V.r < 1:
        raise ValueError("T acts on classes at V_r with r >= 1")
    if verify:
        rec = verify_decomposition(V)
        if not (rec["disjoint"] and rec["covering"]):
            raise DecompositionError(f"double coset decomposition fails at {V!r}: {rec}")
    reps = hecke_reps(V)
    return CompactClass(V, [(x.translate(g, V), a) for x, a in c.terms for g in reps],
                        c.modulus)


# -- the norm relation -------------------------------------------------------------

@dataclass
class NormRelationResult:
    status: str                      # pass | fail | hypotheses-unmet | skipped-budget
    holds: bool = None
    lhs: CompactClass = None
    rhs: CompactClass = None
    square: bool = None
    decomposition: dict = None
    hypotheses: dict = field(default_factory=dict)
    witness: list = field(default_factory=list)
    reason: str = ""

    def summary(self):
        out = {"status": self.status, "holds": self.holds, "square": self.square,
               "hypotheses": self.hypotheses}
        if self.lhs is not None:
            out["lhs"] = self.lhs.summary()
            out["rhs"] = self.rhs.summary()
        if self.decomposition is not None:
            out["decomposition"] = self.decomposition
        if self.witness:
            out["witness"] = self.witness
        if self.reason:
            out["reason"] = self.reason
        return out


def machine_hypotheses(cfg, p, budget=10 ** 6):
    from ..spherical import check_condition_b, check_open_orbit
    rep = check_open_orbit(cfg)
    cond = check_condition_b(cfg, p, 1, budget)
    good = p not in rep.bad_primes and p not in rep.nonunit_primes
    ok = rep.open and good and cond["lie_ok"] and cond["points_ok"] is not False
    return ok, {"open": rep.open, "good_prime": good, "condition_b_lie": cond["lie_ok"],
                "condition_b_points": cond["points_ok"]}


def verify_norm_relation(cfg, p=None, r=1, check_hypotheses=True, budget=10 ** 6, u=None):
    """pushforward(xi_{r+1}) == T xi_r, exactly, plus the lower-left square."""
    p = p if p is not None else cfg.p
    if r < 1:
        raise ValueError("r must be at least 1")
    hyp = {}
    if check_hypotheses:
        ok, hyp = machine_hypotheses(cfg, p, budget)
        if not ok:
            return NormRelationResult("hypotheses-unmet", hypotheses=hyp,
                                      reason="hypotheses of the machine not satisfied")
    prec = working_precision(cfg, p, r)
    try:
        z0 = orbit_class(cfg, r, p, prec, budget, u)
        z1 = orbit_class(cfg, r + 1, p, prec, budget, u)
    except BudgetExceeded as exc:
        return NormRelationResult("skipped-budget", hypotheses=hyp, reason=str(exc))
    Vr = level(cfg, p, r, "V")
    xi0 = shifted_class(cfg, r, z0, p)
    xi1 = shifted_class(cfg, r + 1, z1, p)
    lhs = pushforward(xi1, None, Vr)
    rhs = hecke_t(xi0)
    Urp = level(cfg, p, r, "Uprime")
    square = pushforward(z1, None, Urp) == pullback(z0, Urp)
    holds = lhs == rhs
    witness = [] if holds else [
        {"k": list(x.k), "e": list(x.e), "coefficient": a} for x, a in lhs.difference(rhs)[:5]]
    return NormRelationResult("pass" if holds and square else "fail", holds, lhs, rhs, square,
                              verify_decomposition(Vr), hyp, witness)


# -- compatible families ------------------------------------------------------------

@dataclass
class CompatibleFamily:
    """Classes indexed by r on a tower; ``hecke`` marks the machine's xi_r system."""
    levels: dict
    r_max: int
    hecke: bool = False


@dataclass
class FamilyCheck:
    ok: bool
    failing_r: int = None
    checked: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def family_check(f):
    """pushforward(c_{r+1}) == c_r (or == T c_r for the machine's xi system)."""
    checked = []
    for r in sorted(f.levels):
        if r + 1 not in f.levels or r >= f.r_max:
            continue
        lower, upper = f.levels[r], f.levels[r + 1]
        image = pushforward(upper, None, lower.level)
        target = hecke_t(lower) if f.hecke else lower
        checked.append(r)
        if image != target:
            return FamilyCheck(False, r, checked)
    return FamilyCheck(True, None, checked)


def machine_family(cfg, p=None, r_max=2, budget=10 ** 6):
    """xi_1 .. xi_{r_max+1}: compatible under pushforward after twisting by T."""
    p = p if p is not None else cfg.p
    prec = working_precision(cfg, p, r_max + 1)
    levels = {r: shifted_class(cfg, r, orbit_class(cfg, r, p, prec, budget), p)
              for r in range(1, r_max + 2)}
    return CompatibleFamily(levels, r_max + 1, hecke=True)


def delta_family(lv, r_max, prec=None):
    prec = prec or lv.with_variant(lv.variant, r_max).depth + 1
    levels = {}
    for r in range(r_max + 1):
        L = lv.with_variant(lv.variant, r)
        levels[r] = CompactClass.delta(Coset.identity(L, prec))
    return CompatibleFamily(levels, r_max)
