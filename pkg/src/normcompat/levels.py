"""Congruence level groups U_r, U_r', V_r and the parahoric J.

A level is stored as valuation bounds per eta-weight on the off-Levi
entries together with a Levi congruence (Levi factor mod p^k lies in L^0),
optionally conjugated: ``shift = s`` means tau^{-s} L tau^{s}.

Membership is decided on valuations, never by forming tau-conjugates with
denominators; (tau^{-r} g tau^r)_{ij} = g_{ij} p^{-r(eta_i - eta_j)} makes
the two descriptions agree, and the conjugation form is kept only as a
cross-check in the tests.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product

from sympy.ntheory import primitive_root

from . import residue as R
from .groups import BudgetExceeded, Cocharacter, LeviSub, Scheme
from .groups.roots import cocharacter_basis, root_element_exact, root_system
from .linalg import ExactMatrix
from .linalg.lattice import integer_kernel
from .linalg.rational import vp

VARIANTS = ("U", "Uprime", "V", "J", "custom")


class PivotError(ArithmeticError):
    """Block pivot not invertible: the element has no Iwahori factorization."""


class LevelDescriptor:
    def __init__(self, group, eta, r, variant, levi_sub, p, bounds=None, levi_depth=None,
                 shift=0):
        if variant not in VARIANTS:
            raise ValueError(f"unknown level variant {variant!r}")
        if r < 0:
            raise ValueError("level index r must be non-negative")
        group.check_prime(p)
        self.group = group
        self.eta = eta if isinstance(eta, Cocharacter) else Cocharacter(eta)
        self.r = int(r)
        self.variant = variant
        self.levi_sub = levi_sub if levi_sub is not None else LeviSub.trivial()
        self.p = int(p)
        self.shift = int(shift)
        weights = {self.eta.weight(i, j) for i, j in group.support_set} - {0}
        if variant == "custom":
            self.bounds = {w: int(bounds.get(w, 0)) for w in weights}
            self.levi_depth = int(levi_depth or 0)
        else:
            self.bounds = {w: _variant_bound(variant, r, w) for w in weights}
            self.levi_depth = self.r
        if any(b < 0 for b in self.bounds.values()):
            raise ValueError("base bounds must be non-negative (use shift for conjugates)")

    # -- identity ----------------------------------------------------------
    @cached_property
    def key(self):
        return (repr(self.group.to_spec()), self.eta.eta, self.p,
                tuple(sorted(self.bounds.items())), self.levi_depth, self.levi_sub, self.shift)

    def __eq__(self, other):
        return isinstance(other, LevelDescriptor) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        tag = f"{self.variant}_{self.r}" if self.variant != "custom" else "custom"
        sh = f", shift={self.shift}" if self.shift else ""
        return f"Level({tag}, p={self.p}, eta={self.eta.eta}{sh})"

    # -- derived data --------------------------------------------------------
    @property
    def n(self):
        return self.group.n

    @cached_property
    def entry_bounds(self):
        """(flat position, bound) for off-Levi support entries with a positive bound."""
        n = self.n
        out = []
        for i, j in sorted(self.group.support_set):
            w = self.eta.weight(i, j)
            if w and self.bounds[w] > 0:
                out.append((i * n + j, self.bounds[w]))
        return tuple(out)

    @cached_property
    def levi_positions(self):
        n = self.n
        return tuple(sorted(i * n + j for i, j in self.group.support_set
                            if self.eta.weight(i, j) == 0))

    @cached_property
    def blocks(self):
        """Index blocks of equal eta, in decreasing eta order."""
        vals = sorted(set(self.eta.eta), reverse=True)
        return [tuple(i for i in range(self.n) if self.eta.eta[i] == v) for v in vals]

    @property
    def depth(self):
        """Congruence depth of the base level (membership depends on g mod p^depth)."""
        levi = self.levi_depth if self.levi_sub.kind != "full" else 0
        return max([0, levi] + list(self.bounds.values()))

    @cached_property
    def levi_shortcut(self):
        """True when the Levi factor agrees with the Levi entries mod p^levi_depth."""
        pos = [b for w, b in self.bounds.items() if w > 0]
        neg = [b for w, b in self.bounds.items() if w < 0]
        k = self.levi_depth
        return min(pos, default=k) >= k or min(neg, default=k) >= k

    @cached_property
    def has_iwahori(self):
        """V = Nbar_V . L_V . N_V holds (mod p the level sits in a parahoric of eta)."""
        pos = [b for w, b in self.bounds.items() if w > 0]
        neg = [b for w, b in self.bounds.items() if w < 0]
        return not pos or not neg or min(pos) >= 1 or min(neg) >= 1

    @property
    def levi_trivially_ok(self):
        return self.levi_sub.kind == "full" or self.levi_depth == 0

    def base(self):
        return self.conjugate(-self.shift)

    def conjugate(self, s):
        """tau^{-s} (self) tau^{s}."""
        out = LevelDescriptor(self.group, self.eta, self.r, self.variant, self.levi_sub, self.p,
                              self.bounds, self.levi_depth, self.shift + s)
        out.variant = self.variant
        return out

    def with_variant(self, variant, r):
        return LevelDescriptor(self.group, self.eta, r, variant, self.levi_sub, self.p)

    # -- membership ----------------------------------------------------------
    def contains_residue(self, flat, D):
        """Base-level membership of an element of G(Z_p) given mod p^D."""
        p = self.p
        for pos, b in self.entry_bounds:
            if b > D:
                raise R.PrecisionError(f"bound p^{b} exceeds carried precision p^{D}")
            if flat[pos] % p ** b:
                return False
        if self.levi_trivially_ok:
            return True
        k = self.levi_depth
        if k > D:
            raise R.PrecisionError("Levi depth exceeds carried precision")
        m = p ** k
        lev = flat if self.levi_shortcut else ldu_residue(flat, self.n, self.blocks, p, m)[1]
        return self.levi_sub.contains_levi_mod(lev, self.n, self.levi_positions, p, k)

    def contains(self, g):
        """Membership of an ExactMatrix over Q."""
        g = g if isinstance(g, ExactMatrix) else ExactMatrix(g)
        if g.ring is not None:
            raise ValueError("level membership takes a rational matrix")
        if self.shift:
            g = _tau_conj(g, self.eta, self.p, self.shift)
        if not self.group.contains(g, self.p):
            return False
        flat = g.flat()
        p = self.p
        for pos, b in self.entry_bounds:
            v = vp(flat[pos], p)
            if v is not None and v < b:
                return False
        if self.levi_trivially_ok:
            return True
        k = self.levi_depth
        res = R.from_rational(flat, p, p ** k)
        return self._levi_ok(res, k)

    def _levi_ok(self, res, k):
        m = self.p ** k
        lev = res if self.levi_shortcut else ldu_residue(res, self.n, self.blocks, self.p, m)[1]
        return self.levi_sub.contains_levi_mod(lev, self.n, self.levi_positions, self.p, k)

    # -- containment -----------------------------------------------------------
    def is_subgroup_of(self, other):
        _same_frame(self, other)
        if self.shift != other.shift:
            return all(other.contains(x) for x in generators_exact(self))
        if any(self.bounds[w] < other.bounds[w] for w in self.bounds):
            return False
        if other.levi_trivially_ok:
            return True
        if self.levi_depth >= other.levi_depth and self.levi_sub.is_subset_of(other.levi_sub) \
                and not self.levi_trivially_ok:
            return True
        return all(other.contains(x) for x in generators_exact(self))

    def intersection(self, other):
        """Pointwise-maximum bounds; Levi data must be comparable."""
        _same_frame(self, other)
        if self.shift != other.shift:
            raise ValueError("intersection of differently conjugated levels is not modelled")
        bounds = {w: max(self.bounds[w], other.bounds[w]) for w in self.bounds}
        a, b = self, other
        if a.levi_trivially_ok:
            lv = b
        elif b.levi_trivially_ok:
            lv = a
        elif a.levi_sub.is_subset_of(b.levi_sub) and a.levi_depth >= b.levi_depth:
            lv = a
        elif b.levi_sub.is_subset_of(a.levi_sub) and b.levi_depth >= a.levi_depth:
            lv = b
        else:
            raise ValueError("Levi conditions are not comparable")
        return LevelDescriptor(self.group, self.eta, 0, "custom", lv.levi_sub, self.p, bounds,
                               lv.levi_depth, self.shift)

    # -- enumeration -----------------------------------------------------------
    def scheme(self, D):
        base = Scheme.of_group(self.group)
        bounds = {pos: (0, min(b, D)) for pos, b in self.entry_bounds}
        cong = []
        if not self.levi_trivially_ok and self.levi_shortcut:
            k = min(self.levi_depth, D)
            if self.levi_sub.kind == "trivial":
                for pos in self.levi_positions:
                    bounds[pos] = (int(pos % (self.n + 1) == 0), k)
            else:
                for c in self.levi_sub.characters:
                    num, den = c.num_den(self.n)
                    cong.append((num - den, k))
        return base.restricted(bounds=bounds, congruences=cong, label=repr(self))

    def estimate(self, D):
        """Expected size of the level mod p^D (exact for the Iwahori-product levels)."""
        from .groups import lie_algebra
        e = D * lie_algebra(self.group).dim
        e -= sum(min(self.bounds[a.weight], D) for a in root_system(self.group, self.eta)
                 if a.weight)
        if not self.levi_trivially_ok:
            k = min(self.levi_depth, D)
            if self.levi_sub.kind == "trivial":
                e -= k * sum(1 for a in root_system(self.group, self.eta) if a.weight == 0)
                e -= k * len(cocharacter_basis(self.group))
            else:
                e -= k * len(self.levi_sub.characters)
        return self.p ** max(e, 0)

    def points(self, D, budget=10 ** 6):
        """Sorted residues mod p^D of the base level."""
        pts = self.scheme(D).points(self.p, D, budget, estimate=self.estimate(D))
        if self.levi_trivially_ok or self.levi_shortcut:
            return pts
        return [x for x in pts if self.contains_residue(x, D)]


def _variant_bound(variant, r, w):
    if variant == "U":
        return r * w if w > 0 else 0
    if variant == "Uprime":
        return (r + 1) * w if w > 0 else 0
    if variant == "V":
        return 0 if w > 0 else r * (-w)
    return 0 if w > 0 else 1          # J: reduction mod p lies in Q


def _same_frame(a, b):
    if (a.group != b.group) or a.eta != b.eta or a.p != b.p:
        raise ValueError("levels live in different groups, cocharacters or primes")


def _tau_conj(g, eta, p, s):
    """tau^{s} g tau^{-s}."""
    n = g.rows
    flat = g.flat()
    out = [flat[i * n + j] * Fraction(p) ** (s * (eta.eta[i] - eta.eta[j]))
           for i in range(n) for j in range(n)]
    return ExactMatrix.from_flat(out, n)


def level_contains(g, lv):
    return lv.contains(g)


def congruence_depth(lv):
    return lv.depth


# -- Iwahori factorization -------------------------------------------------------

def _block_ldu(a, n, blocks, inv_block, mul, sub):
    """a = L D U with L block-lower unipotent, D block diagonal, U block-upper unipotent.

    ``blocks`` are index tuples in elimination order; entries are combined with
    the supplied ring operations.
    """
    S = [list(a[i * n:(i + 1) * n]) for i in range(n)]
    L = [[int(i == j) for j in range(n)] for i in range(n)]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    D = [[0] * n for _ in range(n)]
    for t, bt in enumerate(blocks):
        P = [[S[i][j] for j in bt] for i in bt]
        Pinv = inv_block(P)
        for i, ii in enumerate(bt):
            for j, jj in enumerate(bt):
                D[ii][jj] = P[i][j]
        rest = [i for bs in blocks[t + 1:] for i in bs]
        for s_ in rest:
            row = [S[s_][j] for j in bt]
            for j, jj in enumerate(bt):
                L[s_][jj] = sum_(mul(row[k], Pinv[k][j]) for k in range(len(bt)))
        for s_ in rest:
            col = [S[i][s_] for i in bt]
            for i, ii in enumerate(bt):
                U[ii][s_] = sum_(mul(Pinv[i][k], col[k]) for k in range(len(bt)))
        for s1 in rest:
            for s2 in rest:
                corr = sum_(mul(L[s1][jj], S[jj][s2]) for jj in bt)
                S[s1][s2] = sub(S[s1][s2], corr)
    return L, D, U


def sum_(it):
    tot = 0
    for x in it:
        tot += x
    return tot


def _inv_frac(P):
    n = len(P)
    w = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(P)]
    for c in range(n):
        piv = next((r for r in range(c, n) if w[r][c] != 0), None)
        if piv is None:
            raise PivotError("singular block pivot")
        w[c], w[piv] = w[piv], w[c]
        f = w[c][c]
        w[c] = [x / f for x in w[c]]
        for r in range(n):
            if r != c and w[r][c]:
                g = w[r][c]
                w[r] = [x - g * y for x, y in zip(w[r], w[c])]
    return [r[n:] for r in w]


def ldu_residue(flat, n, blocks, p, m):
    """Block LDU of a residue matrix mod m = p^k; returns flat (nbar, l, n)."""
    def inv_block(P):
        b = len(P)
        out = R.kernels.mat_inv(tuple(x % m for r in P for x in r), b, p, m)
        if out is None:
            raise PivotError("block pivot is not a unit")
        return [list(out[i * b:(i + 1) * b]) for i in range(b)]

    L, D, U = _block_ldu(flat, n, blocks, inv_block, lambda x, y: x * y % m,
                         lambda x, y: (x - y) % m)
    fl = lambda M: tuple(M[i][j] % m for i in range(n) for j in range(n))
    return fl(L), fl(D), fl(U)


@dataclass(frozen=True)
class IwahoriFactorization:
    nbar: ExactMatrix
    l: ExactMatrix
    n: ExactMatrix

    def recompose(self):
        return self.nbar * self.l * self.n


def iwahori_factor(g, lv):
    """g = nbar . l . n, exactly over Q, for g in the base level lv."""
    g = g if isinstance(g, ExactMatrix) else ExactMatrix(g)
    if not lv.base().contains(g):
        raise ValueError("iwahori_factor: element is not in the level group")
    n = g.rows
    p = lv.p

    def inv_block(P):
        out = _inv_frac(P)
        det = ExactMatrix(P).det()
        if Fraction(det).numerator % p == 0:
            raise PivotError("block pivot is not a p-adic unit")
        return out

    L, D, U = _block_ldu(g.flat(), n, lv.blocks, inv_block, lambda x, y: x * y,
                         lambda x, y: x - y)
    return IwahoriFactorization(ExactMatrix(L), ExactMatrix(D), ExactMatrix(U))


# -- generators and representatives ---------------------------------------------

def unit_generators(p, k):
    """Topological generators of 1 + p^k Z_p (all of Z_p^x when k = 0)."""
    if k <= 0:
        return [-1, 3] if p == 2 else [int(primitive_root(p * p))]
    if p == 2 and k == 1:
        return [-1, 3]
    return [1 + p ** k]


def _diag_power(lam, a, n):
    return tuple(Fraction(a) ** lam[i // n] if i % (n + 1) == 0 else Fraction(0)
                 for i in range(n * n))


def _levi_root_exponent(lv, root):
    if lv.levi_trivially_ok:
        return 0
    if lv.levi_sub.kind == "kernel":
        x = root_element_exact(root, 1, lv.n)
        if all(c.evaluate(x, lv.n) == 1 for c in lv.levi_sub.characters):
            return 0
    return lv.levi_depth


def generators_exact(lv):
    """Exact rational topological generators of the level (including its shift)."""
    g, n, p = lv.group, lv.n, lv.p
    gens = []
    for root in root_system(g, lv.eta):
        b = lv.bounds[root.weight] if root.weight else _levi_root_exponent(lv, root)
        gens.append(root_element_exact(root, p ** b, n))
    lattice = cocharacter_basis(g)
    if lv.levi_trivially_ok:
        gens += [_diag_power(lam, a, n) for lam in lattice for a in unit_generators(p, 0)]
    else:
        k = lv.levi_depth
        gens += [_diag_power(lam, a, n) for lam in lattice for a in unit_generators(p, k)]
        if lv.levi_sub.kind == "kernel":
            for lam in _kernel_lattice(lv.levi_sub.characters, lattice, n):
                gens += [_diag_power(lam, a, n) for a in unit_generators(p, 0)]
    if lv.shift:
        gens = [_tau_conj(ExactMatrix.from_flat(x, n), lv.eta, p, -lv.shift).flat()
                for x in gens]
    return [tuple(x) for x in gens]


def _kernel_lattice(chars, lattice, n):
    """Cocharacters in the span of ``lattice`` killed by every character."""
    rows = []
    for c in chars:
        d = c.derivative(n)
        rows.append([sum(Fraction(d[q * (n + 1)]) * lam[q] for q in range(n)) for lam in lattice])
    return [[sum(c * l[i] for c, l in zip(comb, lattice)) for i in range(n)]
            for comb in integer_kernel(rows, len(lattice))]


def mirabolic_generators(mirab, p):
    """Exact topological generators of Q^0(Z_p) = N(Z_p) . L^0(Z_p)."""
    g, n = mirab.group, mirab.group.n
    L0 = mirab.levi_sub
    sign = -1 if mirab.opposite else 1
    gens = []
    for root in root_system(g, mirab.eta):
        w = sign * root.weight
        x = root_element_exact(root, 1, n)
        if w > 0 or (w == 0 and (L0.kind == "full" or (L0.kind == "kernel" and all(
                c.evaluate(x, n) == 1 for c in L0.characters)))):
            gens.append(x)
    lattice = cocharacter_basis(g)
    if L0.kind == "full":
        lams = lattice
    elif L0.kind == "kernel":
        lams = _kernel_lattice(L0.characters, lattice, n)
    else:
        lams = []
    gens += [_diag_power(lam, a, n) for lam in lams for a in unit_generators(p, 0)]
    return [tuple(x) for x in gens]


def generators_residue(lv, D):
    if lv.shift:
        raise ValueError("residue generators need an unshifted level")
    m = lv.p ** D
    return [R.from_rational(x, lv.p, m) for x in generators_exact(lv)]


def _root_products(lv, roots, lo, hi, D):
    """Ordered products of x_alpha(p^lo(w) t), t < p^(hi(w)-lo(w)), as residues mod p^D."""
    n, p = lv.n, lv.p
    m = p ** D
    factors = []
    for root in roots:
        a, b = lo(root.weight), hi(root.weight)
        if b < a:
            raise ValueError("representative bounds are not nested")
        factors.append([R.from_rational(root_element_exact(root, p ** a * t, n), p, m)
                        for t in range(p ** (b - a))])
    out = []
    for combo in product(*factors):
        out.append(R.prod(combo, n, m))
    return out


def _distinct_mod(reps, lv, D, limit=4000):
    """Pairwise inequivalence mod the base level lv (checked for up to ``limit`` reps)."""
    n, p = lv.n, lv.p
    m = p ** D
    sample = reps if len(reps) <= limit else reps[:limit]
    invs = [R.inv(x, n, p, m) for x in sample]
    for i in range(len(sample)):
        for j in range(i + 1, len(sample)):
            if lv.contains_residue(R.mul(invs[i], sample[j], n, m), D):
                return (i, j)
    return None


def coset_reps_n(lv, from_r, to_r):
    """Representatives of N_{to_r} \\ N_{from_r} (equivalently N_{from_r}/N_{to_r}).

    Returned as exact matrices, ordered products of root elements
    x_alpha(p^{from_r <eta,alpha>} t) in the fixed global root order.
    """
    if to_r < from_r:
        raise ValueError("to_r must be at least from_r")
    n, p = lv.n, lv.p
    roots = [a for a in root_system(lv.group, lv.eta) if a.weight > 0]
    out = []
    factors = [[root_element_exact(a, p ** (from_r * a.weight) * t, n)
                for t in range(p ** ((to_r - from_r) * a.weight))] for a in roots]
    for combo in product(*factors):
        acc = ExactMatrix.identity(n)
        for x in combo:
            acc = acc * ExactMatrix.from_flat(x, n)
        out.append(acc)
    expected = p ** sum((to_r - from_r) * a.weight for a in roots)
    if len(out) != expected:
        raise RuntimeError("root-product count disagrees with the index formula")
    target = LevelDescriptor(lv.group, lv.eta, 0, "custom", LeviSub.full(), p,
                             {w: (to_r * w if w > 0 else 0) for w in lv.bounds}, 0)
    D = target.depth + 1
    res = [R.from_rational(x.flat(), p, p ** D) for x in out]
    clash = _distinct_mod(res, target, D)
    if clash is not None:
        raise RuntimeError(f"representatives {clash} coincide modulo N_{to_r}")
    return out


def n_index(lv, r):
    """[N_r : N_{r+1}] = [U_r : U_r'] = p^{sum of positive eta-weights over roots}."""
    return lv.p ** sum(a.weight for a in root_system(lv.group, lv.eta) if a.weight > 0)


def _levi_scheme(lv):
    n = lv.n
    zero = {i * n + j: 0 for i, j in lv.group.support_set if lv.eta.weight(i, j)}
    return Scheme.of_group(lv.group).restricted(fixed=zero, label="levi")


def _levi_reps(V, U, D, budget):
    if U.levi_trivially_ok or (V.levi_depth == U.levi_depth and V.levi_sub == U.levi_sub):
        return [R.identity(V.n)]
    n, p = V.n, V.p
    k = max(U.levi_depth, V.levi_depth)
    sch = _levi_scheme(V)
    pts = sch.points(p, k, budget)
    mk = p ** k
    inV = [x for x in pts if V.levi_trivially_ok or
           V.levi_sub.contains_levi_mod(x, n, V.levi_positions, p, V.levi_depth)]
    reps = []
    for x in inV:
        for y in reps:
            z = R.mul(R.inv(y, n, p, mk), x, n, mk)
            if U.levi_sub.contains_levi_mod(z, n, U.levi_positions, p, U.levi_depth):
                break
        else:
            reps.append(x)
    return [sch.lift(x, k, D, p) if D > k else R.reduce(x, p ** D) for x in reps]


def level_index(V, U, budget=10 ** 6):
    """[V : U] for nested unshifted levels, by the Iwahori product formula."""
    _same_frame(V, U)
    if not V.has_iwahori:
        raise ValueError(f"{V!r} has no Iwahori decomposition; count representatives instead")
    roots = root_system(V.group, V.eta)
    e = sum(U.bounds[a.weight] - V.bounds[a.weight] for a in roots if a.weight)
    D = max(V.depth, U.depth, 1)
    return V.p ** e * len(_levi_reps(V, U, D, budget))


def coset_reps(V, U, D, budget=10 ** 6):
    """Residues mod p^D of representatives for V/U (U a subgroup of V, both unshifted).

    Candidates are products nbar . l . n over the Iwahori factors; their
    count equals the index and pairwise inequivalence is verified.
    """
    _same_frame(V, U)
    if V.shift or U.shift:
        raise ValueError("coset representatives need unshifted levels")
    if not U.is_subgroup_of(V):
        raise ValueError(f"{U!r} is not contained in {V!r}")
    if not V.has_iwahori:
        raise ValueError(f"{V!r} has no Iwahori decomposition")
    roots = root_system(V.group, V.eta)
    neg = [a for a in roots if a.weight < 0]
    pos = [a for a in roots if a.weight > 0]
    lo = lambda w: V.bounds[w]
    hi = lambda w: U.bounds[w]
    nbar = _root_products(V, neg, lo, hi, D)
    nn = _root_products(V, pos, lo, hi, D)
    levi = _levi_reps(V, U, D, budget)
    total = len(nbar) * len(nn) * len(levi)
    if total > budget:
        raise BudgetExceeded(f"{total} coset representatives exceed budget", total)
    n, m = V.n, V.p ** D
    reps = [R.prod((a, b, c), n, m) for a in nbar for b in levi for c in nn]
    clash = _distinct_mod(reps, U, D)
    if clash is not None:
        raise RuntimeError(f"Iwahori product representatives {clash} coincide modulo U")
    return reps


# -- the Lemma ------------------------------------------------------------------

def orbit_points(cfg, p, D, budget=10 ** 6):
    """Residues mod p^D of u^{-1} iota(Q_H^0) u, sorted and deduplicated."""
    m = p ** D
    n = cfg.g.n
    u = R.from_rational(cfg.u.flat(), p, m)
    ui = R.inv(u, n, p, m)
    pts = cfg.mirab_h.scheme.points(p, D, budget)
    out = set()
    for q in pts:
        x = cfg.emb.image_flat(q, p, m)
        out.add(R.mul(R.mul(ui, x, n, m), u, n, m))
    return sorted(out)


def _lemma_at(cfg, p, r, D, budget):
    Ur = LevelDescriptor(cfg.g, cfg.eta_g, r, "U", cfg.levi_sub_g, p)
    Urp = Ur.with_variant("Uprime", r)
    Ur1 = Ur.with_variant("U", r + 1)
    n, m = cfg.g.n, p ** D
    X = orbit_points(cfg, p, D, budget)
    XU = [x for x in X if Ur.contains_residue(x, D)]
    XUp = [x for x in XU if Urp.contains_residue(x, D)]
    XU1 = [x for x in XU if Ur1.contains_residue(x, D)]
    extra = sorted(set(XUp) ^ set(XU1))
    part_i = not extra
    index = len(XU) // len(XUp) if XUp else 0
    expected = n_index(Ur, r)
    reps = [R.from_rational(x.flat(), p, m) for x in coset_reps_n(Ur, r, r + 1)]
    rep_invs = [R.inv(x, n, p, m) for x in reps]
    found = [None] * len(reps)
    left = len(reps)
    for x in XU:
        if not left:
            break
        for k, ri in enumerate(rep_invs):
            if found[k] is None and Urp.contains_residue(R.mul(ri, x, n, m), D):
                found[k] = x
                left -= 1
                break
    missing = [reps[k] for k in range(len(reps)) if found[k] is None]
    part_ii = index == expected and not missing
    witnesses = {}
    if extra:
        witnesses["part_i"] = [list(x) for x in extra[:5]]
    if not part_ii:
        witnesses["part_ii"] = {"index": index, "expected": expected,
                                "uncovered_reps": [list(x) for x in missing[:5]]}
    return {"part_i": part_i, "part_ii": part_ii, "index": index, "expected_index": expected,
            "orbit_points": len(X), "witnesses": witnesses,
            "representatives": [list(x) if x is not None else None for x in found]}


def verify_lemma(cfg, p, r, depth=None, budget=10 ** 6, guard=True):
    """Exhaustive check of the index Lemma for u^{-1} Q_H^0 u inside U_r.

    part_i: u^{-1}Q_H^0u ∩ U_r' = u^{-1}Q_H^0u ∩ U_{r+1};
    part_ii: [u^{-1}Q_H^0u ∩ U_r : u^{-1}Q_H^0u ∩ U_r'] = [U_r : U_r'], with an
    explicit representative in the conjugate for every coset of U_r'.
    """
    cfg.g.check_prime(p)
    need = LevelDescriptor(cfg.g, cfg.eta_g, r + 1, "U", cfg.levi_sub_g, p).depth
    D = depth if depth is not None else need + 1
    if D < need:
        raise ValueError(f"depth {D} is below the congruence depth {need} of U_(r+1)")
    out = _lemma_at(cfg, p, r, D, budget)
    out["depth"] = D
    if guard:
        try:
            again = _lemma_at(cfg, p, r, D + 1, budget)
            out["guard"] = {"depth": D + 1, "agrees": all(
                again[k] == out[k] for k in ("part_i", "part_ii", "index"))}
        except BudgetExceeded:
            out["guard"] = {"depth": D + 1, "skipped": "budget"}
    return out
