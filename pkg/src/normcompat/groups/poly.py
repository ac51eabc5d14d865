"""Sparse integer polynomials in the flattened matrix entries x_0 .. x_{n^2-1}."""

from itertools import permutations


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c):
        return cls({(): c})

    @classmethod
    def var(cls, i):
        return cls({(i,): 1})

    def __add__(self, other):
        other = _lift(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return Poly(t)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2))
                t[m] = t.get(m, 0) + c1 * c2
        return Poly(t)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def variables(self):
        return sorted({v for m in self.terms for v in m})

    def degree(self):
        return max((len(m) for m in self.terms), default=0)

    def diff(self, v):
        t = {}
        for m, c in self.terms.items():
            k = m.count(v)
            if k:
                lst = list(m)
                lst.remove(v)
                mm = tuple(lst)
                t[mm] = t.get(mm, 0) + c * k
        return Poly(t)

    def substitute(self, values):
        """Replace variables with constants (values: dict var -> int)."""
        t = {}
        for m, c in self.terms.items():
            coef = c
            rest = []
            for v in m:
                if v in values:
                    coef *= values[v]
                else:
                    rest.append(v)
            if coef:
                key = tuple(rest)
                t[key] = t.get(key, 0) + coef
        return Poly(t)

    def __call__(self, x):
        """Evaluate on a sequence of ring elements (ints, Fractions, duals...)."""
        total = 0
        for m, c in self.terms.items():
            v = c
            for i in m:
                v = v * x[i]
            total = total + v
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            mon = "*".join(f"x{i}" for i in m)
            parts.append(f"{c}*{mon}" if mon else str(c))
        return " + ".join(parts)


def _lift(x):
    return x if isinstance(x, Poly) else Poly.const(x)


def compile_program(polys):
    """Flatten polynomials into the tuple format used by the kernels."""
    counts, coefs, lens, flat = [], [], [], []
    for f in polys:
        items = sorted(f.terms.items())
        counts.append(len(items))
        for m, c in items:
            coefs.append(c)
            lens.append(len(m))
            flat.extend(m)
    return (tuple(counts), tuple(coefs), tuple(lens), tuple(flat))


def matrix_vars(n, offset=0, idx=None):
    """Symbolic n x n matrix over Poly; ``idx`` maps local (i, j) to flat variable ids."""
    if idx is None:
        return [[Poly.var(offset + i * n + j) for j in range(n)] for i in range(n)]
    return [[Poly.var(idx(i, j)) for j in range(n)] for i in range(n)]


def sym_det(m):
    """Leibniz determinant of a square matrix of Polys (fine for n <= 6)."""
    n = len(m)
    if n == 0:
        return Poly.const(1)
    if n <= 3:
        total = Poly()
        for perm in permutations(range(n)):
            term = Poly.const(_sign(perm))
            for i, j in enumerate(perm):
                term = term * m[i][j]
            total = total + term
        return total
    total = Poly()
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        sub = sym_det(minor)
        if not m[0][j].is_zero():
            term = m[0][j] * sub
            total = total + term if j % 2 == 0 else total - term
    return total


def _sign(perm):
    s = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def sym_matmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = Poly()
            for t in range(k):
                if not a[i][t].is_zero() and not b[t][j].is_zero():
                    acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def sym_transpose(a):
    return [list(r) for r in zip(*a)]


def const_matrix(rows):
    return [[Poly.const(x) for x in r] for r in rows]
