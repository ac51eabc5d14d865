"""Group descriptors: GL, SL, Sp, GSp, SO, products, fiber products, kernels.

Every descriptor realizes its group as a closed subscheme of GL_n for an
ambient size n (products sit block-diagonally) and exposes the defining
polynomials, the polynomials that must take unit values, and the
generators of its maximal torus quotient.
"""

from fractions import Fraction
from functools import cached_property

from .characters import Character, sim_anchor
from .poly import Poly, matrix_vars, sym_det, sym_matmul, sym_transpose, const_matrix


class UnsupportedPrime(ValueError):
    pass


def _reindex(poly, mapping):
    t = {}
    for m, c in poly.terms.items():
        key = tuple(sorted(mapping[v] for v in m))
        t[key] = t.get(key, 0) + c
    return Poly(t)


def _form_tuple(form):
    return tuple(tuple(int(x) for x in r) for r in form)


class GroupDescriptor:
    kind = None
    n = 0

    # -- defining data (overridden) -------------------------------------
    def support(self):
        """Positions (i, j) that may be nonzero."""
        raise NotImplementedError

    def equations(self):
        raise NotImplementedError

    def unit_polys(self):
        return []

    def torus_quotient(self):
        raise NotImplementedError

    def classical_dim(self):
        raise NotImplementedError

    def forms(self):
        """(indices, form) for every similitude-carrying block."""
        return []

    def odd_only(self):
        return False

    def to_spec(self):
        raise NotImplementedError

    # -- derived ---------------------------------------------------------
    @cached_property
    def support_set(self):
        return frozenset(self.support())

    @cached_property
    def flat_support(self):
        return tuple(sorted(i * self.n + j for i, j in self.support_set))

    def check_prime(self, p):
        if self.odd_only() and p == 2:
            raise UnsupportedPrime("orthogonal groups are modelled for odd p only")

    def det_character(self, indices=None):
        return Character.det(range(self.n) if indices is None else indices)

    def form_for(self, indices):
        for idx, form in self.forms():
            if tuple(idx) == tuple(indices):
                return form
        raise KeyError(f"no similitude block on indices {indices}")

    def character_from_spec(self, spec):
        return Character.from_spec(spec, self.form_for)

    def contains(self, mat, p=None):
        """Membership of an ExactMatrix: over Q (p-integral and unit data if p given)
        or over its residue ring."""
        n = self.n
        if mat.rows != n or mat.cols != n:
            return False
        flat = mat.flat()
        sup = self.support_set
        for i in range(n):
            for j in range(n):
                if (i, j) not in sup and flat[i * n + j] != 0:
                    return False
        if mat.ring is None:
            if p is not None and any(Fraction(x).denominator % p == 0 for x in flat):
                return False
            if any(f(flat) != 0 for f in self.equations()):
                return False
            if mat.det() == 0:
                return False
            for f in self.unit_polys():
                v = Fraction(f(flat))
                if v == 0 or (p is not None and v.numerator % p == 0):
                    return False
            if p is not None and Fraction(mat.det()).numerator % p == 0:
                return False
            return True
        q, N = mat.ring
        self.check_prime(q)
        m = q ** N
        if any(f(flat) % m for f in self.equations()):
            return False
        if mat.det() % q == 0:
            return False
        return all(f(flat) % q for f in self.unit_polys())

    def __eq__(self, other):
        return isinstance(other, GroupDescriptor) and self.to_spec() == other.to_spec()

    def __hash__(self):
        return hash(repr(self.to_spec()))

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"


class GL(GroupDescriptor):
    kind = "GL"

    def __init__(self, n):
        self.n = int(n)

    def support(self):
        return [(i, j) for i in range(self.n) for j in range(self.n)]

    def equations(self):
        return []

    def unit_polys(self):
        return []

    def torus_quotient(self):
        return [self.det_character()]

    def classical_dim(self):
        return self.n * self.n

    def to_spec(self):
        return {"type": "GL", "n": self.n}


class SL(GL):
    kind = "SL"

    @cached_property
    def _eqs(self):
        return [sym_det(matrix_vars(self.n)) - 1]

    def equations(self):
        return self._eqs

    def torus_quotient(self):
        return []

    def classical_dim(self):
        return self.n * self.n - 1

    def to_spec(self):
        return {"type": "SL", "n": self.n}


class _FormGroup(GroupDescriptor):
    def __init__(self, form):
        self.form = _form_tuple(form)
        self.n = len(self.form)
        if any(len(r) != self.n for r in self.form):
            raise ValueError("form must be square")

    def support(self):
        return [(i, j) for i in range(self.n) for j in range(self.n)]

    @cached_property
    def _gram(self):
        g = matrix_vars(self.n)
        return sym_matmul(sym_matmul(sym_transpose(g), const_matrix(self.form)), g)


class Sp(_FormGroup):
    kind = "Sp"

    def __init__(self, form):
        super().__init__(form)
        f = self.form
        if any(f[i][j] != -f[j][i] for i in range(self.n) for j in range(self.n)):
            raise ValueError("Sp needs an alternating form")
        if self.n % 2:
            raise ValueError("alternating forms have even size")

    @cached_property
    def _eqs(self):
        G = self._gram
        return [G[i][j] - self.form[i][j] for i in range(self.n) for j in range(i + 1, self.n)]

    def equations(self):
        return self._eqs

    def torus_quotient(self):
        return []

    def classical_dim(self):
        m = self.n // 2
        return m * (2 * m + 1)

    def to_spec(self):
        return {"type": "Sp", "form": [list(r) for r in self.form]}


class GSp(Sp):
    kind = "GSp"

    @cached_property
    def _eqs(self):
        G = self._gram
        a, b = sim_anchor(self.form)
        jab = self.form[a][b]
        eqs = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if (i, j) == (a, b):
                    continue
                eqs.append(G[i][j] * jab - G[a][b] * self.form[i][j])
        return eqs

    def similitude(self):
        return Character.sim(range(self.n), self.form)

    def unit_polys(self):
        a, b = sim_anchor(self.form)
        return [self._gram[a][b] * self.form[a][b]]

    def forms(self):
        return [(tuple(range(self.n)), self.form)]

    def torus_quotient(self):
        return [self.similitude()]

    def classical_dim(self):
        return super().classical_dim() + 1

    def to_spec(self):
        return {"type": "GSp", "form": [list(r) for r in self.form]}


class SO(_FormGroup):
    kind = "SO"

    def __init__(self, form):
        super().__init__(form)
        f = self.form
        if any(f[i][j] != f[j][i] for i in range(self.n) for j in range(self.n)):
            raise ValueError("SO needs a symmetric form")

    def odd_only(self):
        return True

    @cached_property
    def _eqs(self):
        G = self._gram
        eqs = [G[i][j] - self.form[i][j] for i in range(self.n) for j in range(i, self.n)]
        eqs.append(sym_det(matrix_vars(self.n)) - 1)
        return eqs

    def equations(self):
        return self._eqs

    def torus_quotient(self):
        return []

    def classical_dim(self):
        return self.n * (self.n - 1) // 2

    def to_spec(self):
        return {"type": "SO", "form": [list(r) for r in self.form]}


class Product(GroupDescriptor):
    kind = "Product"

    def __init__(self, factors):
        self.factors = list(factors)
        self.offsets = []
        off = 0
        for f in self.factors:
            self.offsets.append(off)
            off += f.n
        self.n = off

    def _map(self, k):
        f, o, n = self.factors[k], self.offsets[k], self.n
        return {v: (o + v // f.n) * n + (o + v % f.n) for v in range(f.n * f.n)}

    def factor_indices(self, k):
        o = self.offsets[k]
        return tuple(range(o, o + self.factors[k].n))

    def support(self):
        out = []
        for f, o in zip(self.factors, self.offsets):
            out += [(o + i, o + j) for i, j in f.support()]
        return out

    @cached_property
    def _eqs(self):
        eqs = []
        for k, f in enumerate(self.factors):
            mp = self._map(k)
            eqs += [_reindex(e, mp) for e in f.equations()]
        return eqs

    def equations(self):
        return self._eqs

    def unit_polys(self):
        out = []
        for k, f in enumerate(self.factors):
            mp = self._map(k)
            out += [_reindex(e, mp) for e in f.unit_polys()]
        return out

    def forms(self):
        out = []
        for f, o in zip(self.factors, self.offsets):
            out += [(tuple(i + o for i in idx), form) for idx, form in f.forms()]
        return out

    def odd_only(self):
        return any(f.odd_only() for f in self.factors)

    def torus_quotient(self):
        out = []
        for f, o in zip(self.factors, self.offsets):
            out += [c.shift(o) for c in f.torus_quotient()]
        return out

    def classical_dim(self):
        return sum(f.classical_dim() for f in self.factors)

    def to_spec(self):
        return {"type": "Product", "factors": [f.to_spec() for f in self.factors]}


def _char_equation(chi1, chi2, n):
    """chi1 == chi2 as a polynomial identity (denominators cleared)."""
    n1, d1 = chi1.num_den(n)
    n2, d2 = chi2.num_den(n)
    return n1 * d2 - n2 * d1


class FiberProduct(Product):
    """{(g1, g2) : chi1(g1) = chi2(g2)}, with chi2 given in g2's own coordinates."""

    kind = "FiberProduct"

    def __init__(self, left, right, chi_left, chi_right):
        super().__init__([left, right])
        self.chi_left = chi_left
        self.chi_right = chi_right

    @cached_property
    def _eqs(self):
        eqs = list(Product._eqs.func(self))
        eqs.append(_char_equation(self.chi_left, self.chi_right.shift(self.offsets[1]), self.n))
        return eqs

    def torus_quotient(self):
        return Product.torus_quotient(self)

    def classical_dim(self):
        return Product.classical_dim(self) - 1

    def to_spec(self):
        return {"type": "FiberProduct", "left": self.factors[0].to_spec(),
                "right": self.factors[1].to_spec(),
                "chi_left": self.chi_left.to_spec(), "chi_right": self.chi_right.to_spec()}


class KernelOf(GroupDescriptor):
    kind = "KernelOf"

    def __init__(self, group, character):
        self.group = group
        self.character = character
        self.n = group.n

    def support(self):
        return self.group.support()

    @cached_property
    def _eqs(self):
        num, den = self.character.num_den(self.n)
        return list(self.group.equations()) + [num - den]

    def equations(self):
        return self._eqs

    def unit_polys(self):
        return self.group.unit_polys()

    def forms(self):
        return self.group.forms()

    def odd_only(self):
        return self.group.odd_only()

    def torus_quotient(self):
        return self.group.torus_quotient()

    def classical_dim(self):
        return self.group.classical_dim() - 1

    def to_spec(self):
        return {"type": "KernelOf", "group": self.group.to_spec(),
                "character": self.character.to_spec()}


def standard_symplectic_form(m):
    """[[0, S], [-S, 0]] with S the m x m antidiagonal matrix of ones."""
    n = 2 * m
    J = [[0] * n for _ in range(n)]
    for i in range(m):
        J[i][n - 1 - i] = 1
        J[n - 1 - i][i] = -1
    return J


def antidiagonal_form(n):
    return [[int(i + j == n - 1) for j in range(n)] for i in range(n)]


def group_from_spec(spec):
    t = spec["type"]
    if t == "GL":
        return GL(spec["n"])
    if t == "SL":
        return SL(spec["n"])
    if t == "Sp":
        return Sp(spec["form"])
    if t == "GSp":
        return GSp(spec["form"])
    if t == "SO":
        return SO(spec["form"])
    if t == "Product":
        return Product([group_from_spec(f) for f in spec["factors"]])
    if t == "FiberProduct":
        left = group_from_spec(spec["left"])
        right = group_from_spec(spec["right"])
        return FiberProduct(left, right, left.character_from_spec(spec["chi_left"]),
                            right.character_from_spec(spec["chi_right"]))
    if t == "KernelOf":
        g = group_from_spec(spec["group"])
        return KernelOf(g, g.character_from_spec(spec["character"]))
    raise ValueError(f"unknown group type {t!r}")
