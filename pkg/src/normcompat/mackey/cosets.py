"""Finitely supported functions on G(Q_p)/U: cosets, classes, push and pull.

A coset xU is stored through a representative x = k . diag(p^e) with k in
GL_n(Z_p) known modulo p^prec and e an integer vector. Every coset the
machine produces has this shape (orbit points times powers of tau times
unipotent translations); general right translations are accepted whenever
they keep it.

Equality is semantic: xU = x'U iff x^{-1}x' lies in U. Writing
K = k^{-1}k' and d = diag(p^e), this is d^{-1} K d' in U, decided on
valuations of K plus the Levi congruence, and a PrecisionError is raised
whenever the carried precision cannot settle it.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .. import residue as R
from ..groups import BudgetExceeded
from ..levels import LevelDescriptor, coset_reps, generators_exact, generators_residue
from ..linalg import ExactMatrix, rref_mod_p
from ..linalg.rational import vp


class ContainmentError(ValueError):
    """The conjugation precondition of a pushforward fails."""


class NormalFormError(ValueError):
    """A translation would leave the k . diag(p^e) normal form."""


def _frac_flat(g):
    if isinstance(g, ExactMatrix):
        if g.ring is not None:
            raise ValueError("translations must be rational matrices")
        return tuple(g.flat()), g.rows
    flat = tuple(Fraction(x) for x in g)
    n = int(round(len(flat) ** 0.5))
    return flat, n


@dataclass(frozen=True, eq=False)
class Coset:
    k: tuple
    e: tuple
    level: LevelDescriptor
    prec: int

    # -- construction ------------------------------------------------------
    @classmethod
    def identity(cls, level, prec):
        return cls(R.identity(level.n), (0,) * level.n, level, prec)

    @classmethod
    def from_matrix(cls, g, level, prec):
        """Coset gU of a rational matrix g = k0 . diag(p^f) with k0 in GL_n(Z_p)."""
        flat, n = _frac_flat(g)
        p = level.p
        f = _column_valuations(flat, n, p)
        k0 = [flat[i * n + j] / Fraction(p) ** f[j] for i in range(n) for j in range(n)]
        m = p ** prec
        k = R.from_rational(k0, p, m)
        if R.val(R.det(k, n, m), p, 1) != 0:
            raise NormalFormError("matrix is not of the form k . diag(p^e) with k in GL_n(Z_p)")
        return cls(k, tuple(f), level, prec)

    # -- derived -----------------------------------------------------------
    @property
    def n(self):
        return self.level.n

    @property
    def rep(self):
        """The representative k . diag(p^e) as a rational ExactMatrix."""
        n, p = self.n, self.level.p
        return ExactMatrix.from_flat([Fraction(self.k[i * n + j]) * Fraction(p) ** self.e[j]
                                      for i in range(n) for j in range(n)], n)

    @cached_property
    def k_inv(self):
        return R.inv(self.k, self.n, self.level.p, self.level.p ** self.prec)

    @cached_property
    def e_eff(self):
        """e relative to the unshifted base level: x tau^{-s} L0 = x L."""
        s = self.level.shift
        return tuple(a - s * b for a, b in zip(self.e, self.level.eta.eta))

    @cached_property
    def elementary(self):
        return tuple(sorted(self.e))

    @cached_property
    def flag_key(self):
        """An invariant of xU: for every cut of the eta-blocks whose mixing
        entries are divisible by p^a in d U d^{-1}, the span of the leading
        columns of k mod p^a, in a canonical basis. None if e is not an eta
        multiple."""
        lv = self.level
        eta = lv.eta.eta
        s = _eta_multiple(self.e_eff, eta)
        if s is None:
            return None
        b2 = {w: max(b + s * w, 0) for w, b in lv.bounds.items()}
        n, p = self.n, lv.p
        parts = []
        for direction, blocks in ((-1, list(lv.blocks)), (1, list(reversed(lv.blocks)))):
            cols = []
            for t, blk in enumerate(blocks[:-1]):
                cols += list(blk)
                rest = [i for b in blocks[t + 1:] for i in b]
                ws = {eta[i] - eta[j] for i in rest for j in cols}
                a = min(min(b2.get(w, 0) for w in ws), self.prec)
                if a >= 1:
                    parts.append((direction, t, a, _span_key(self.k, cols, n, p, a)))
        return (self.e_eff, tuple(parts))

    # -- equality ------------------------------------------------------------
    def same(self, other):
        if self.level != other.level:
            return False
        if self.elementary != other.elementary:
            return False
        base = self.level if not self.level.shift else self.level.base()
        return _same_coset(self.k_inv, other.k, self.e_eff, other.e_eff, base,
                           min(self.prec, other.prec))

    def __eq__(self, other):
        return isinstance(other, Coset) and self.same(other)

    def __hash__(self):
        return hash((self.level, self.elementary))

    def __repr__(self):
        return f"Coset(k={list(self.k)}, e={list(self.e)}, {self.level!r})"

    # -- actions ---------------------------------------------------------------
    def left(self, g_res):
        """g . xU for g in GL_n(Z_p) given by residues."""
        m = self.level.p ** self.prec
        return Coset(R.mul(tuple(x % m for x in g_res), self.k, self.n, m), self.e,
                     self.level, self.prec)

    def translate(self, g, level):
        """x g V for a rational g (the pushforward on one coset)."""
        flat, n = _frac_flat(g)
        p = self.level.p
        f = _column_valuations(flat, n, p)
        g0 = [flat[i * n + j] / Fraction(p) ** f[j] for i in range(n) for j in range(n)]
        return self._right(g0, f, level)

    def translate_residue(self, g_res, level, gprec=None):
        """x g V for g in GL_n(Z_p) given mod p^gprec (default: this coset's precision)."""
        return self._right(g_res, (0,) * self.n, level, gprec)

    def _right(self, g0, f, level, gprec=None):
        """k . (d g0 d^{-1}) . diag(p^(e+f)); gprec None means g0 is exact."""
        n, p = self.n, self.level.p
        e = self.e
        drop = max(e[j] - e[i] for i in range(n) for j in range(n))
        prec = self.prec if gprec is None else min(self.prec, gprec - drop)
        if prec <= 0:
            raise R.PrecisionError("no precision left after translation")
        m = p ** prec
        conj = []
        for i in range(n):
            for j in range(n):
                a = e[i] - e[j]
                x = g0[i * n + j]
                if gprec is None:
                    y = Fraction(x) * Fraction(p) ** a
                    if y.denominator % p == 0:
                        raise NormalFormError("translation leaves the k . diag(p^e) form")
                    conj.append(y.numerator * pow(y.denominator, -1, m) % m)
                elif a >= 0:
                    conj.append(x * p ** a % m)
                else:
                    if x % p ** min(-a, gprec):
                        raise NormalFormError("translation leaves the k . diag(p^e) form")
                    conj.append(x // p ** (-a) % m)
        k = R.mul(tuple(x % m for x in self.k), tuple(conj), n, m)
        if R.val(R.det(k, n, m), p, 1):
            raise NormalFormError("translation is not invertible over Z_p after conjugation")
        return Coset(k, tuple(a + b for a, b in zip(e, f)), level, prec)


def _eta_multiple(e, eta):
    """s with e - s*eta constant, or None."""
    ref = [(i, j) for i in range(len(eta)) for j in range(len(eta)) if eta[i] != eta[j]]
    if not ref:
        return None
    i, j = ref[0]
    num, den = e[i] - e[j], eta[i] - eta[j]
    if num % den:
        return None
    s = num // den
    c = {a - s * b for a, b in zip(e, eta)}
    return s if len(c) == 1 else None


def _span_key(k, cols, n, p, a):
    """Canonical basis of the span of columns ``cols`` of k mod p^a (a free summand)."""
    m = p ** a
    vecs = [[k[i * n + j] % p for i in range(n)] for j in cols]
    _, piv = rref_mod_p(vecs, p)[:2]
    c = len(cols)
    minor = tuple(k[i * n + j] % m for i in piv for j in cols)
    inv = R.inv(minor, c, p, m)
    out = []
    for i in range(n):
        row = [k[i * n + j] % m for j in cols]
        out.append(tuple(sum(row[t] * inv[t * c + u] for t in range(c)) % m for u in range(c)))
    return tuple(out)


def _column_valuations(flat, n, p):
    out = []
    for j in range(n):
        vs = [vp(flat[i * n + j], p) for i in range(n)]
        vs = [v for v in vs if v is not None]
        if not vs:
            raise ValueError("singular matrix")
        out.append(min(vs))
    return out


def _same_coset(k_inv, k2, e1, e2, base, P):
    """d1^{-1} (k1^{-1} k2) d2 in base, from residues mod p^P."""
    if sum(e1) != sum(e2):
        return False
    p, n = base.p, base.n
    m = p ** P
    # cheap rejection on the bounded entries before forming the whole product
    for pos, b in base.entry_bounds:
        i, j = divmod(pos, n)
        need = b + e1[i] - e2[j]
        if 0 < need <= P:
            x = sum(k_inv[i * n + t] * k2[t * n + j] for t in range(n))
            if x % p ** need:
                return False
    K = R.mul(tuple(x % m for x in k_inv), tuple(x % m for x in k2), n, m)
    drop = max([0] + [e1[i] - e2[j] for i in range(n) for j in range(n)])
    Pm = P - drop
    M = []
    for i in range(n):
        for j in range(n):
            a = e1[i] - e2[j]
            x = K[i * n + j]
            if a > 0:
                v = R.val(x, p, P)
                if v < a and v < P:
                    return False
                if v >= P and a > P:
                    raise R.PrecisionError("coset comparison needs more precision")
                M.append(x // p ** a)
            else:
                M.append(x * p ** (-a))
    if Pm <= 0:
        raise R.PrecisionError("coset comparison needs more precision")
    mm = p ** Pm
    M = tuple(x % mm for x in M)
    for pos, b in base.entry_bounds:
        if b > Pm:
            if R.val(M[pos], p, Pm) < Pm:
                return False
            raise R.PrecisionError("coset comparison needs more precision")
    return base.contains_residue(M, Pm)


# -- classes -----------------------------------------------------------------

class _Index:
    """Coset lookup: elementary divisors, then the flag key, then pairwise tests.

    Keys of equal shape (same e and cuts) that differ separate cosets, so only
    the matching bucket and buckets of other shapes need scanning.
    """

    def __init__(self):
        self.by_elem = {}

    @staticmethod
    def _shape(fk):
        return None if fk is None else (fk[0], tuple(x[:3] for x in fk[1]))

    def find(self, c):
        sub = self.by_elem.get(c.elementary)
        if not sub:
            return None
        fk = c.flag_key
        shape = self._shape(fk)
        candidates = [sub.get(shape, {}).get(fk, ())] if shape is not None else []
        candidates += [items for sh, buckets in sub.items() if sh != shape or sh is None
                       for items in buckets.values()]
        for items in candidates:
            for other, slot in items:
                if other.same(c):
                    return slot
        return None

    def add(self, c, slot):
        fk = c.flag_key
        (self.by_elem.setdefault(c.elementary, {}).setdefault(self._shape(fk), {})
         .setdefault(fk, []).append((c, slot)))


class CompactClass:
    """A finite formal sum of cosets at one level, coefficients in Z or Z/modulus."""

    __slots__ = ("level", "terms", "modulus", "_index")

    def __init__(self, level, terms=(), modulus=None):
        self.level = level
        self.modulus = modulus
        cosets, coeffs = [], []
        index = _Index()
        for c, a in terms:
            if c.level != level:
                raise ValueError(f"coset at {c.level!r} in a class at {level!r}")
            slot = index.find(c)
            if slot is None:
                index.add(c, len(cosets))
                cosets.append(c)
                coeffs.append(a)
            else:
                coeffs[slot] += a
        if modulus is not None:
            coeffs = [a % modulus for a in coeffs]
        keep = [i for i, a in enumerate(coeffs) if a]
        self.terms = tuple((cosets[i], coeffs[i]) for i in keep)
        self._index = None

    @classmethod
    def delta(cls, coset, coeff=1, modulus=None):
        return cls(coset.level, [(coset, coeff)], modulus)

    @classmethod
    def zero(cls, level, modulus=None):
        return cls(level, (), modulus)

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    @property
    def mass(self):
        return sum(a for _, a in self.terms)

    def coefficient(self, coset):
        idx = self._lookup()
        slot = idx.find(coset)
        return 0 if slot is None else self.terms[slot][1]

    def _lookup(self):
        if self._index is None:
            self._index = _Index()
            for i, (c, _) in enumerate(self.terms):
                self._index.add(c, i)
        return self._index

    def _same_space(self, other):
        if self.level != other.level:
            raise ValueError("classes live at different levels")
        if self.modulus != other.modulus:
            raise ValueError("classes have different coefficient rings")

    def __add__(self, other):
        self._same_space(other)
        return CompactClass(self.level, self.terms + other.terms, self.modulus)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a):
        return CompactClass(self.level, [(c, a * x) for c, x in self.terms], self.modulus)

    __rmul__ = scale

    def is_zero(self):
        return not self.terms

    def difference(self, other):
        """Terms of self - other (empty iff the classes are equal)."""
        return (self - other).terms

    def __eq__(self, other):
        if not isinstance(other, CompactClass):
            return NotImplemented
        if self.level != other.level or self.modulus != other.modulus:
            return False
        if len(self.terms) != len(other.terms) or self.mass != other.mass:
            return False
        return not self.difference(other)

    __hash__ = None

    def __repr__(self):
        return f"CompactClass({self.level!r}, {len(self.terms)} terms, mass {self.mass})"

    def summary(self):
        return {"level": repr(self.level), "support": len(self.terms), "mass": self.mass,
                "coefficients": sorted(a for _, a in self.terms)}


# -- functoriality ---------------------------------------------------------------

def _conjugate_exact(g, x, n):
    gi = ExactMatrix.from_flat(g, n).inverse()
    return (gi * ExactMatrix.from_flat(x, n) * ExactMatrix.from_flat(g, n))


def check_containment(source, g, target):
    """g^{-1} . source . g inside target, tested on exact topological generators."""
    flat, n = _frac_flat(g)
    for x in generators_exact(source):
        if not target.contains(_conjugate_exact(flat, x, n)):
            return False
    return True


def pushforward(c, g, target, check=True):
    """[g]_*: delta_{xU} -> delta_{xgV}, requires g^{-1} U g inside V."""
    if g is None:
        g = ExactMatrix.identity(c.level.n)
    if check and not check_containment(c.level, g, target):
        raise ContainmentError(f"g^-1 {c.level!r} g is not contained in {target!r}")
    return CompactClass(target, [(x.translate(g, target), a) for x, a in c.terms], c.modulus)


def reps_for(V, U, prec, budget=10 ** 6):
    """Residue representatives of V/U for unshifted levels U inside V.

    Iwahori-type V uses the product formula; otherwise the cosets are the
    orbit of U under the generators of V, found breadth first.
    """
    if V.shift or U.shift:
        raise ValueError("pullback needs unshifted levels")
    if V.has_iwahori:
        return coset_reps(V, U, prec, budget)
    return [c.k for c in _orbit_reps(V, U, prec, budget)]


def _orbit_reps(V, U, prec, budget):
    gens = generators_residue(V, prec)
    start = Coset.identity(U, prec)
    index = _Index()
    index.add(start, 0)
    found = [start]
    i = 0
    while i < len(found):
        c = found[i]
        i += 1
        for g in gens:
            d = c.left(g)
            if index.find(d) is None:
                index.add(d, len(found))
                found.append(d)
                if len(found) > budget:
                    raise BudgetExceeded(f"more than {budget} cosets in {V!r}/{U!r}", budget)
    return found


def index_of(V, U, budget=10 ** 6):
    """[V : U], by formula when V is of Iwahori type and by counting otherwise."""
    from ..levels import level_index
    if V.has_iwahori:
        return level_index(V, U, budget)
    return len(_orbit_reps(V, U, max(V.depth, U.depth, 1) + 1, budget))


def pullback(c, target, reps=None, budget=10 ** 6):
    """x V -> sum over rho in V/U of x rho U.

    ``reps`` may be supplied as (residues, precision) to reuse or corrupt a
    representative set.
    """
    V, U = c.level, target
    if V == U:
        return CompactClass(U, c.terms, c.modulus)
    if not c.terms:
        return CompactClass.zero(U, c.modulus)
    prec = max(x.prec for x, _ in c.terms)
    spread = max(max(x.e) - min(x.e) for x, _ in c.terms)
    if reps is None:
        reps = reps_for(V, U, prec + spread, budget)
        rprec = prec + spread
    else:
        reps, rprec = reps
    out = [(x.translate_residue(rho, U, rprec), a) for x, a in c.terms for rho in reps]
    return CompactClass(U, out, c.modulus)
