"""Immutable exact matrices over Q or over a residue ring Z/p^N."""

from fractions import Fraction

from .. import kernels
from .rational import reduce_mod, to_rational


class RingMismatch(ValueError):
    pass


class NotInvertible(ArithmeticError):
    pass


class ExactMatrix:
    """A rows x cols matrix with a uniform ring tag.

    ``ring`` is ``None`` for rationals, or ``(p, N)`` for Z/p^N (entries are
    stored as residues in ``[0, p^N)``).
    """

    __slots__ = ("rows", "cols", "ring", "_e", "_hash")

    def __init__(self, entries, ring=None):
        entries = [list(r) for r in entries]
        if not entries or not entries[0]:
            raise ValueError("matrix must be non-empty")
        cols = len(entries[0])
        if any(len(r) != cols for r in entries):
            raise ValueError("ragged rows")
        if ring is None:
            data = tuple(tuple(to_rational(x) for x in r) for r in entries)
        else:
            p, N = ring
            m = p ** N
            data = tuple(tuple(reduce_mod(x, m) for x in r) for r in entries)
        self.rows = len(entries)
        self.cols = cols
        self.ring = None if ring is None else (int(ring[0]), int(ring[1]))
        self._e = data
        self._hash = None

    @classmethod
    def identity(cls, n, ring=None):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], ring)

    @classmethod
    def diagonal(cls, diag, ring=None):
        n = len(diag)
        return cls([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)], ring)

    @classmethod
    def from_flat(cls, flat, n, ring=None):
        return cls([flat[i * n:(i + 1) * n] for i in range(n)], ring)

    @property
    def modulus(self):
        return None if self.ring is None else self.ring[0] ** self.ring[1]

    def __getitem__(self, ij):
        i, j = ij
        return self._e[i][j]

    def rows_list(self):
        return [list(r) for r in self._e]

    def flat(self):
        return tuple(x for r in self._e for x in r)

    def shape(self):
        return (self.rows, self.cols)

    def is_square(self):
        return self.rows == self.cols

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatch(f"ring tags differ: {self.ring} vs {other.ring}")

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.ring == other.ring
                and self._e == other._e)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self._e))
        return self._hash

    def __repr__(self):
        tag = "Q" if self.ring is None else f"Z/{self.ring[0]}^{self.ring[1]}"
        body = "; ".join(" ".join(str(x) for x in r) for r in self._e)
        return f"ExactMatrix[{tag}]({body})"

    def _wrap(self, entries):
        out = ExactMatrix.__new__(ExactMatrix)
        out.rows = len(entries)
        out.cols = len(entries[0])
        out.ring = self.ring
        out._e = tuple(tuple(r) for r in entries)
        out._hash = None
        return out

    def __add__(self, other):
        self._check(other)
        m = self.modulus
        rows = [[x + y for x, y in zip(r, s)] for r, s in zip(self._e, other._e)]
        if m:
            rows = [[x % m for x in r] for r in rows]
        return self._wrap(rows)

    def __sub__(self, other):
        self._check(other)
        m = self.modulus
        rows = [[x - y for x, y in zip(r, s)] for r, s in zip(self._e, other._e)]
        if m:
            rows = [[x % m for x in r] for r in rows]
        return self._wrap(rows)

    def scale(self, c):
        m = self.modulus
        if m:
            c = reduce_mod(c, m)
            return self._wrap([[x * c % m for x in r] for r in self._e])
        c = to_rational(c)
        return self._wrap([[x * c for x in r] for r in self._e])

    def __mul__(self, other):
        if not isinstance(other, ExactMatrix):
            return self.scale(other)
        self._check(other)
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        m = self.modulus
        if m and self.is_square() and other.is_square():
            n = self.rows
            flat = kernels.mat_mul(self.flat(), other.flat(), n, m)
            return self._wrap([flat[i * n:(i + 1) * n] for i in range(n)])
        cols = list(zip(*other._e))
        rows = [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._e]
        if m:
            rows = [[x % m for x in r] for r in rows]
        return self._wrap(rows)

    def transpose(self):
        return self._wrap([list(c) for c in zip(*self._e)])

    def det(self):
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if self.ring is not None:
            return kernels.mat_det(self.flat(), n, self.modulus)
        return _det_fraction(self.rows_list())

    def inverse(self):
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        if self.ring is not None:
            p, _ = self.ring
            flat = kernels.mat_inv(self.flat(), n, p, self.modulus)
            if flat is None:
                raise NotInvertible("determinant is not a unit")
            return self._wrap([flat[i * n:(i + 1) * n] for i in range(n)])
        return self._wrap(_inverse_fraction(self.rows_list()))

    def reduce(self, p, N):
        """Image in Z/p^N (from Q: requires p-integral entries)."""
        if self.ring is not None:
            q, M = self.ring
            if q != p or N > M:
                raise RingMismatch("cannot raise precision of a residue matrix")
        return ExactMatrix(self.rows_list(), (p, N))

    def lift(self):
        """Rational matrix of the residue representatives in [0, p^N)."""
        if self.ring is None:
            return self
        return ExactMatrix(self.rows_list())

    def is_integral(self, p=None):
        if self.ring is not None:
            return True
        if p is None:
            return all(x.denominator == 1 for r in self._e for x in r)
        return all(x.denominator % p for r in self._e for x in r)


def _det_fraction(a):
    a = [[Fraction(x) for x in r] for r in a]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] * inv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def _inverse_fraction(a):
    from .echelon import rref

    n = len(a)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(a)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise NotInvertible("singular rational matrix")
    return [r[n:] for r in red]


def as_matrix(x, ring=None):
    if isinstance(x, ExactMatrix):
        return x
    return ExactMatrix(x, ring)
