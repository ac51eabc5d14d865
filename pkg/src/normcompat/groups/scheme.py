"""Closed subschemes of GL_n given by polynomial equations, with point
enumeration over Z/p^N by brute force mod p followed by Hensel lifting.

A point mod p^k lifts to p^{k+1} along an affine F_p-space cut out by the
Jacobian at the point mod p, so every level after the first costs one
linear solve per point (cached by the residue mod p).
"""

from fractions import Fraction
from itertools import product

from .. import kernels
from ..linalg import ModPSolver, Subspace, nullspace
from .poly import Poly, compile_program


class BudgetExceeded(RuntimeError):
    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class Scheme:
    """Free entries, fixed entries, equations, congruences and unit conditions.

    ``congruences`` are (poly, depth) pairs that must vanish mod p^depth only;
    ``bounds`` map flat positions to (target, b): entry == target mod p^b.
    """

    def __init__(self, n, free, fixed=None, equations=(), unit_polys=(), congruences=(),
                 bounds=None, label=""):
        self.n = n
        self.free = tuple(sorted(free))
        fixed = dict(fixed or {})
        for pos in range(n * n):
            if pos not in self.free:
                fixed.setdefault(pos, 0)
        for pos in self.free:
            fixed.pop(pos, None)
        self.fixed = fixed
        self.equations = [e for e in equations if not e.is_zero()]
        self.unit_polys = list(unit_polys)
        self.congruences = [(c, d) for c, d in congruences if not c.is_zero()]
        self.bounds = dict(bounds or {})
        self.label = label
        self._index = {pos: k for k, pos in enumerate(self.free)}
        self._local = None

    @classmethod
    def of_group(cls, g):
        return cls(g.n, g.flat_support, {}, g.equations(), g.unit_polys(), label=g.kind)

    def restricted(self, fixed=None, equations=(), congruences=(), bounds=None, label=None):
        """A subscheme: more fixed entries, equations, congruences or bounds."""
        fixed = dict(fixed or {})
        new_fixed = dict(self.fixed)
        new_fixed.update(fixed)
        free = [pos for pos in self.free if pos not in fixed]
        b = dict(self.bounds)
        for pos, tb in (bounds or {}).items():
            if pos in b:
                t0, b0 = b[pos]
                b[pos] = (t0, b0) if b0 >= tb[1] else tb
            else:
                b[pos] = tb
        return Scheme(self.n, free, new_fixed, list(self.equations) + list(equations),
                      self.unit_polys, list(self.congruences) + list(congruences), b,
                      label if label is not None else self.label)

    # -- local (free-variable) forms ------------------------------------
    def _prepare(self):
        if self._local is not None:
            return self._local
        subst = {pos: v for pos, v in self.fixed.items()}
        idx = self._index

        def localize(f):
            g = f.substitute(subst)
            t = {}
            for m, c in g.terms.items():
                key = tuple(sorted(idx[v] for v in m))
                t[key] = t.get(key, 0) + c
            return Poly(t)

        eqs = [localize(e) for e in self.equations]
        cong = [(localize(c), d) for c, d in self.congruences]
        units = [localize(u) for u in self.unit_polys]
        k = len(self.free)
        all_eqs = eqs + [c for c, _ in cong]
        depths = [None] * len(eqs) + [d for _, d in cong]
        derivs = [[f.diff(v) for v in range(k)] for f in all_eqs]
        self._local = {
            "eqs": all_eqs,
            "depths": depths,
            "units": units,
            "prog": compile_program(all_eqs),
            "dprog": compile_program([d for row in derivs for d in row]),
            "k": k,
        }
        return self._local

    def assemble(self, values):
        """Full flat matrix from free-variable values."""
        out = [0] * (self.n * self.n)
        for pos, v in self.fixed.items():
            out[pos] = v
        for pos, v in zip(self.free, values):
            out[pos] = v
        return out

    def localize_point(self, flat):
        return tuple(flat[pos] for pos in self.free)

    # -- membership -------------------------------------------------------
    def contains_mod(self, flat, p, N):
        m = p ** N
        for pos, v in self.fixed.items():
            if (flat[pos] - v) % m:
                return False
        for pos, (t, b) in self.bounds.items():
            if (flat[pos] - t) % (p ** min(b, N)):
                return False
        full = tuple(x % m for x in flat)
        for e in self.equations:
            if e(full) % m:
                return False
        for c, d in self.congruences:
            if c(full) % (p ** min(d, N)):
                return False
        if kernels.mat_det(full, self.n, p) % p == 0:
            return False
        return all(u(full) % p for u in self.unit_polys)

    # -- Lie algebra -------------------------------------------------------
    def lie_algebra(self):
        """Kernel of the Jacobian of the exact equations at the identity."""
        n = self.n
        ident = [int(pos % (n + 1) == 0) for pos in range(n * n)]
        for pos, v in self.fixed.items():
            if v != ident[pos]:
                raise ValueError("the identity is not a point of this scheme")
        k = len(self.free)
        rows = []
        for f in self.equations:
            row = [f.diff(pos)(ident) for pos in self.free]
            if any(row):
                rows.append(row)
        basis = nullspace(rows, k) if rows else [[int(i == j) for j in range(k)] for i in range(k)]
        vecs = []
        for b in basis:
            v = [Fraction(0)] * (n * n)
            for pos, x in zip(self.free, b):
                v[pos] = Fraction(x)
            vecs.append(v)
        return Subspace(n * n, vecs)

    # -- enumeration -------------------------------------------------------
    def estimate(self, p, N):
        return p ** (N * self.lie_algebra().dim)

    def _level_one(self, p, budget):
        loc = self._prepare()
        k = loc["k"]
        order = sorted(range(k), key=lambda v: (self.free[v] % self.n, self.free[v] // self.n))
        rank = {v: i for i, v in enumerate(order)}
        checks = [[] for _ in range(k + 1)]
        for f in loc["eqs"]:
            last = max((rank[v] for v in f.variables()), default=-1)
            checks[last + 1].append(("eq", f))
        for u in loc["units"]:
            last = max((rank[v] for v in u.variables()), default=-1)
            checks[last + 1].append(("unit", u))
        for kind, f in checks[0]:
            val = f([0] * k) % p
            if (kind == "eq" and val) or (kind == "unit" and not val):
                return []
        allowed = []
        for v in order:
            pos = self.free[v]
            if pos in self.bounds and self.bounds[pos][1] >= 1:
                allowed.append((self.bounds[pos][0] % p,))
            else:
                allowed.append(tuple(range(p)))
        x = [0] * k
        out = []
        nodes = 0
        limit = max(50 * budget, 200000)
        det_n = self.n

        def rec(d):
            nonlocal nodes
            if d == k:
                full = self.assemble(x)
                if kernels.mat_det(tuple(v % p for v in full), det_n, p) % p:
                    out.append(tuple(x))
                return
            v = order[d]
            for a in allowed[d]:
                nodes += 1
                if nodes > limit:
                    raise BudgetExceeded(f"level-one search exceeded {limit} nodes")
                x[v] = a
                ok = True
                for kind, f in checks[d + 1]:
                    val = f(x) % p
                    if (kind == "eq" and val) or (kind == "unit" and not val):
                        ok = False
                        break
                if ok:
                    rec(d + 1)
            x[v] = 0

        rec(0)
        return out

    def _solver(self, cache, base, p, active, forced):
        key = (base, active, forced)
        s = cache.get(key)
        if s is None:
            loc = self._prepare()
            k = loc["k"]
            dvals = kernels.poly_eval(loc["dprog"], base, p)
            cols = [v for v in range(k) if v not in forced]
            rows = [[dvals[i * k + v] for v in cols] for i in active]
            s = (ModPSolver(rows, len(cols), p), cols, dvals)
            cache[key] = s
        return s

    def _lift_step(self, pts, p, k_level, cache, all_lifts=True):
        loc = self._prepare()
        k = loc["k"]
        pk = p ** k_level
        m1 = pk * p
        depths = loc["depths"]
        active = tuple(i for i, d in enumerate(depths) if d is None or d >= k_level + 1)
        forced = {}
        for v, pos in enumerate(self.free):
            if pos in self.bounds:
                t, b = self.bounds[pos]
                if b > k_level:
                    forced[v] = (t // pk) % p
        forced_key = tuple(sorted(forced))
        out = []
        for x in pts:
            base = tuple(a % p for a in x)
            solver, cols, dvals = self._solver(cache, base, p, active, forced_key)
            if active:
                vals = kernels.poly_eval(loc["prog"], x, m1)
                rhs = []
                for i in active:
                    r = -(vals[i] // pk)
                    for v, dg in forced.items():
                        r -= dvals[i * k + v] * dg
                    rhs.append(r % p)
                y0 = solver.particular(rhs)
                if y0 is None:
                    continue
            else:
                y0 = [0] * len(cols)
            if all_lifts:
                kern = solver.kernel
                for coeffs in product(range(p), repeat=len(kern)):
                    y = list(y0)
                    for c, kv in zip(coeffs, kern):
                        if c:
                            y = [(a + c * b) % p for a, b in zip(y, kv)]
                    new = list(x)
                    for v, yv in zip(cols, y):
                        new[v] = (new[v] + pk * yv) % m1
                    for v, dg in forced.items():
                        new[v] = (new[v] + pk * dg) % m1
                    out.append(tuple(new))
            else:
                new = list(x)
                for v, yv in zip(cols, y0):
                    new[v] = (new[v] + pk * yv) % m1
                for v, dg in forced.items():
                    new[v] = (new[v] + pk * dg) % m1
                out.append(tuple(new))
        return out

    def points(self, p, N, budget=10 ** 6, local=False, estimate=None):
        """All points over Z/p^N (sorted flat residue tuples)."""
        est = self.estimate(p, N) if estimate is None else estimate
        if est > budget:
            raise BudgetExceeded(f"estimated {est} points exceeds budget {budget}", est)
        self._prepare()
        pts = self._level_one(p, budget)
        cache = {}
        for lvl in range(1, N):
            pts = self._lift_step(pts, p, lvl, cache)
            if len(pts) > budget:
                raise BudgetExceeded(f"{len(pts)} points at level {lvl + 1} exceed budget", est)
        if local:
            return sorted(pts)
        return sorted(tuple(self.assemble(x)) for x in pts)

    def lift(self, flat, k, N, p):
        """Hensel-lift a point mod p^k to a point mod p^N (one canonical choice)."""
        self._prepare()
        x = tuple(flat[pos] % p ** k for pos in self.free)
        cache = {}
        for lvl in range(k, N):
            lifted = self._lift_step([x], p, lvl, cache, all_lifts=False)
            if not lifted:
                raise ValueError("point does not lift (not a smooth point of the scheme)")
            x = lifted[0]
        return tuple(self.assemble(x))
