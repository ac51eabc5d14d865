"""Open-orbit and stabilizer conditions for a pair (H, G) at a point u.

Condition (A) is the tangent-space statement
dι(lie Q_H^0) + Ad(u) lie Qbar_G = lie g, decided over Q; the primes where
the same statement fails for the integral lattices are reported as
``bad_primes``. Condition (B) asks that the stabilizer
u^{-1} Q_H^0 u ∩ Qbar_G lie in Qbar_G^0 = Nbar_G . L_G^0 and is checked both
on Lie algebras and on points mod p^depth.
"""

import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .groups import BudgetExceeded, MirabolicDescriptor, lie_algebra, parabolic_split
from .groups.roots import root_element_exact, root_system
from .groups.torus import lie_c, torus_differential
from .linalg import ExactMatrix, Subspace, nullspace, rank
from .linalg.lattice import integer_kernel, prime_divisors, saturate, smith_invariants


@dataclass
class PairConfig:
    h: object
    g: object
    emb: object
    eta_g: object
    mirab_h: MirabolicDescriptor
    levi_sub_g: object
    u: ExactMatrix = None
    p: int = None
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.emb.source != self.h or self.emb.target != self.g:
            raise ValueError("embedding does not map h to g")
        if self.mirab_h.group != self.h:
            raise ValueError("mirabolic subgroup is not a subgroup of h")
        self.eta_g.check(self.g)
        if self.u is not None:
            self.u = self.u if isinstance(self.u, ExactMatrix) else ExactMatrix(self.u)
            check_u(self.g, self.u, self.p)

    def with_u(self, u, p=None):
        return PairConfig(self.h, self.g, self.emb, self.eta_g, self.mirab_h, self.levi_sub_g,
                          u, self.p if p is None else p, self.name, dict(self.meta))


def check_u(g, u, p=None):
    if not g.contains(u, p):
        where = f"G(Z_{p})" if p else "G(Q)"
        raise ValueError(f"u is not a point of {where}")


@dataclass
class OrbitReport:
    open: bool
    span_dim: int
    flag_dim: int
    stab_dim: int
    stabilizer: Subspace
    stabilizer_h: Subspace
    bad_primes: set
    nonunit_primes: set
    dim_q_h: int
    dim_qbar_g: int
    dim_g: int
    condition_b: bool = None
    torus_image_dim: int = None
    torus_image: Subspace = None

    def summary(self):
        return {
            "open": self.open, "span_dim": self.span_dim, "flag_dim": self.flag_dim,
            "stab_dim": self.stab_dim, "bad_primes": sorted(self.bad_primes),
            "nonunit_primes": sorted(self.nonunit_primes), "dim_q_h": self.dim_q_h,
            "dim_qbar_g": self.dim_qbar_g, "dim_g": self.dim_g,
            "condition_b": self.condition_b, "torus_image_dim": self.torus_image_dim,
        }


# -- linear algebra helpers ----------------------------------------------------

def _mat(flat, n):
    return [list(flat[i * n:(i + 1) * n]) for i in range(n)]


def _mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n) if a[i][k]) for j in range(n)]
            for i in range(n)]


def _ad(u, uinv):
    n = len(u)

    def f(x):
        y = _mul(_mul(u, _mat(x, n)), uinv)
        return [v for row in y for v in row]

    return f


def _positive_coords(g, eta):
    n = g.n
    return [i * n + j for i, j in sorted(g.support_set) if eta.weight(i, j) > 0]


class _Frame:
    """All Lie data of a configuration at its point u, computed once."""

    def __init__(self, cfg):
        if cfg.u is None:
            raise ValueError("configuration has no point u")
        g = cfg.g
        self.cfg = cfg
        self.n = g.n
        self.split = parabolic_split(g, cfg.eta_g)
        self.lie_g = self.split.lie_g
        self.lie_qbar = self.split.lie_qbar
        self.lie_qh = cfg.mirab_h.lie
        u = [[Fraction(x) for x in row] for row in cfg.u.rows_list()]
        uinv = [[Fraction(x) for x in row] for row in cfg.u.inverse().rows_list()]
        self.u, self.uinv = u, uinv
        self.qh_basis = [list(b) for b in self.lie_qh.basis]
        self.d_iota = [cfg.emb.lie_image(b) for b in self.qh_basis]
        self.conj = [_ad(uinv, u)(x) for x in self.d_iota]      # Ad(u^{-1}) d iota
        self.pos = _positive_coords(g, cfg.eta_g)


def _frame(cfg):
    return _Frame(cfg)


def stabilizer_lie(cfg, frame=None):
    """Ad(u^{-1}) dι(lie Q_H^0) ∩ lie Qbar_G in G-coordinates."""
    f = frame or _frame(cfg)
    n2 = f.n * f.n
    return Subspace(n2, f.conj).intersection(f.lie_qbar)


def stabilizer_lie_h(cfg, frame=None):
    """{Y in lie Q_H^0 : Ad(u^{-1}) dι(Y) in lie Qbar_G} in H-coordinates."""
    f = frame or _frame(cfg)
    if not cfg.emb.is_injective():
        raise ValueError("dι is not injective; the stabilizer cannot be pulled back to H")
    nh2 = cfg.h.n ** 2
    if not f.qh_basis:
        return Subspace.zero(nh2)
    rows = [[x[c] for x in f.conj] for c in f.pos]
    if rows:
        kern = nullspace(rows, len(f.qh_basis))
    else:
        kern = [[int(i == j) for j in range(len(f.qh_basis))] for i in range(len(f.qh_basis))]
    vecs = [[sum(Fraction(c) * b[k] for c, b in zip(comb, f.qh_basis)) for k in range(nh2)]
            for comb in kern]
    return Subspace(nh2, vecs)


def _bad_primes(cfg, f):
    """Primes where the integral span fails to be all of lie(G_Z) ⊗ F_p.

    With c the common denominator of u and W = c.u, Ad(u)X is a unit multiple
    of W.X.adj(W) away from the primes of c.det(W), which are returned
    separately as the primes where u is not integral with unit determinant.
    """
    c = 1
    for x in cfg.u.flat():
        d = Fraction(x).denominator
        c = c * d // _gcd(c, d)
    W = [[Fraction(x) * c for x in row] for row in cfg.u.rows_list()]
    detW = ExactMatrix(W).det()
    adj = [[x * detW for x in row] for row in ExactMatrix(W).inverse().rows_list()]
    nonunit = prime_divisors(c) | prime_divisors(int(detW))
    rows = [cfg.emb.lie_image(b) for b in saturate(f.lie_qh)]
    conj = _ad(W, adj)
    rows += [conj(x) for x in saturate(f.lie_qbar)]
    rows = [[int(x) for x in r] for r in rows]
    if not rows or rank(rows) != f.lie_g.dim:
        return None, nonunit
    out = set()
    for d in smith_invariants(rows)[:f.lie_g.dim]:
        out |= prime_divisors(d)
    return out - nonunit, nonunit


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def check_open_orbit(cfg, frame=None):
    f = frame or _frame(cfg)
    n2 = f.n * f.n
    img = Subspace(n2, f.d_iota)
    ad_u = _ad(f.u, f.uinv)
    span = img + f.lie_qbar.image(ad_u, n2)
    stab = stabilizer_lie(cfg, f)
    is_open = span == f.lie_g
    bad, nonunit = _bad_primes(cfg, f)
    try:
        stab_h = stabilizer_lie_h(cfg, f)
    except ValueError:
        stab_h = None
    return OrbitReport(
        open=is_open, span_dim=span.dim, flag_dim=f.lie_g.dim - f.lie_qbar.dim,
        stab_dim=stab.dim, stabilizer=stab, stabilizer_h=stab_h,
        bad_primes=bad if bad is not None else set(), nonunit_primes=nonunit,
        dim_q_h=f.lie_qh.dim, dim_qbar_g=f.lie_qbar.dim, dim_g=f.lie_g.dim)


def _qbar0_lie(cfg, split):
    return split.lie_nbar + cfg.levi_sub_g.lie(cfg.g, split)


def condition_b_lie(cfg, frame=None):
    f = frame or _frame(cfg)
    return _qbar0_lie(cfg, f.split).contains(stabilizer_lie(cfg, f))


def condition_b_points(cfg, p, depth, budget=10 ** 6):
    """Every point of u^{-1} Q_H^0 u ∩ Qbar_G mod p^depth lies in Qbar_G^0.

    Returns (ok, checked, violations); ok is None when enumeration is over budget.
    """
    from .levels import orbit_points
    n = cfg.g.n
    try:
        pts = orbit_points(cfg, p, depth, budget)
    except BudgetExceeded as exc:
        warnings.warn(f"condition (B) point check skipped: {exc}")
        return None, 0, []
    m = p ** depth
    pos = _positive_coords(cfg.g, cfg.eta_g)
    levi = [i * n + j for i, j in sorted(cfg.g.support_set) if cfg.eta_g.weight(i, j) == 0]
    checked = 0
    bad = []
    for x in pts:
        if any(x[c] % m for c in pos):
            continue
        checked += 1
        if cfg.levi_sub_g.kind == "full":
            continue
        if not cfg.levi_sub_g.contains_levi_mod(x, n, levi, p, depth):
            bad.append(x)
    return not bad, checked, bad


def check_condition_b(cfg, p, depth=1, budget=10 ** 6):
    lie_ok = condition_b_lie(cfg)
    points_ok, checked, bad = condition_b_points(cfg, p, depth, budget)
    return {"lie_ok": lie_ok, "points_ok": points_ok, "points_checked": checked,
            "violations": [list(x) for x in bad[:5]]}


def torus_image(cfg, frame=None):
    f = frame or _frame(cfg)
    h = cfg.h
    chars = list(h.torus_quotient())
    stab_h = stabilizer_lie_h(cfg, f)
    k = len(chars)
    d_pi = torus_differential(h, chars)
    lc = lie_c(h, chars)
    image = stab_h.image(d_pi, k) if k else Subspace.zero(0)
    proper = image != lc
    vanishing = []
    if k:
        stab_rows = [d_pi(list(b)) for b in stab_h.basis]
        all_rows = [d_pi(list(b)) for b in lie_algebra(h).basis]
        kill_stab = integer_kernel(stab_rows, k)
        kill_all = integer_kernel(all_rows, k)
        chosen = [list(v) for v in kill_all]
        base = rank(chosen) if chosen else 0
        for v in kill_stab:
            trial = chosen + [list(v)]
            if rank(trial) > base:
                chosen = trial
                base += 1
                vanishing.append(_char_product(chars, v))
    return {"image": image, "image_dim": image.dim, "lie_c": lc, "lie_c_dim": lc.dim,
            "proper": proper, "vanishing_characters": vanishing}


def _char_product(chars, coeffs):
    out = None
    for c, e in zip(chars, coeffs):
        if e:
            term = c ** int(e)
            out = term if out is None else out * term
    return out


def orbit_report(cfg, p=None, depth=1, budget=10 ** 6, points=True):
    """check_open_orbit plus condition (B) and the torus image."""
    f = _frame(cfg)
    rep = check_open_orbit(cfg, f)
    lie_ok = condition_b_lie(cfg, f)
    rep.condition_b = lie_ok
    if points and p is not None:
        ok, _, _ = condition_b_points(cfg, p, depth, budget)
        if ok is not None:
            rep.condition_b = lie_ok and ok
    if rep.stabilizer_h is not None and cfg.h.torus_quotient():
        ti = torus_image(cfg, f)
        rep.torus_image = ti["image"]
        rep.torus_image_dim = ti["image_dim"]
    return rep


# -- search ----------------------------------------------------------------------

@dataclass
class FindUResult:
    u: ExactMatrix
    status: str                 # found | budget-exhausted | dimension-obstruction
    tried: int
    report: OrbitReport = None
    reason: str = ""


def _unipotent_candidates(cfg, values):
    g = cfg.g
    n = g.n
    roots = [a for a in root_system(g, cfg.eta_g) if a.weight > 0]
    for ts in values(len(roots)):
        acc = ExactMatrix.identity(n)
        for a, t in zip(roots, ts):
            if t:
                acc = acc * ExactMatrix.from_flat(root_element_exact(a, t, n), n)
        yield acc


def find_u(cfg, strategy="enumerate", p=None, budget=2000, seed=0, candidates=None, box=3,
           integral=False):
    """Search for u with an open Q_H^0-orbit, good reduction at p.

    ``enumerate`` runs through products of positive root elements with
    parameters in [0, p) (the big cell meets every open double coset);
    ``random`` draws parameters from [-box, box] with a seeded generator;
    ``candidates`` tries a user-supplied list. A failed search only reports an
    exhausted budget. ``integral`` skips candidates with non-integer entries
    (config files store u over Z).
    """
    p = p if p is not None else cfg.p
    dim_qh = cfg.mirab_h.lie.dim
    split = parabolic_split(cfg.g, cfg.eta_g)
    flag = split.lie_g.dim - split.lie_qbar.dim
    if dim_qh < flag:
        return FindUResult(None, "dimension-obstruction", 0,
                           reason=f"dim Q_H^0 = {dim_qh} < {flag} = dim of the flag variety")
    if strategy == "enumerate":
        if p is None:
            raise ValueError("enumerate strategy needs a prime")
        source = _unipotent_candidates(cfg, lambda k: product(range(p), repeat=k))
    elif strategy == "random":
        rng = random.Random(seed)

        def draws(k):
            yield (0,) * k
            while True:
                yield tuple(rng.randint(-box, box) for _ in range(k))

        source = _unipotent_candidates(cfg, draws)
    elif strategy == "candidates":
        source = (c if isinstance(c, ExactMatrix) else ExactMatrix(c) for c in candidates or [])
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    tried = 0
    for u in source:
        if tried >= budget:
            break
        tried += 1
        if not cfg.g.contains(u, p):
            continue
        if integral and any(Fraction(x).denominator != 1 for x in u.flat()):
            continue
        c = cfg.with_u(u, p)
        rep = check_open_orbit(c)
        if rep.open and (p is None or (p not in rep.bad_primes and p not in rep.nonunit_primes)):
            return FindUResult(u, "found", tried, rep)
    return FindUResult(None, "budget-exhausted", tried,
                       reason=f"no candidate among {tried} tried (not a proof of nonexistence)")
