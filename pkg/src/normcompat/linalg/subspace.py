"""Subspaces of Q^n canonicalized by reduced row-echelon form."""

from fractions import Fraction

from .echelon import nullspace, rref


class DimensionMismatch(ValueError):
    pass


class Subspace:
    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim, vectors=()):
        vectors = [list(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatch("vector length differs from ambient dimension")
        red, pivots = rref(vectors) if vectors else ([], [])
        self.ambient_dim = ambient_dim
        self.basis = tuple(tuple(r) for r in red[:len(pivots)])
        self.pivots = tuple(pivots)

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def full(cls, n):
        return cls(n, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def coordinate(cls, n, coords):
        coords = sorted(set(coords))
        return cls(n, [[int(i == c) for i in range(n)] for c in coords])

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return self.dim

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def _same(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch(f"ambient {self.ambient_dim} vs {other.ambient_dim}")

    def __add__(self, other):
        self._same(other)
        return Subspace(self.ambient_dim, list(self.basis) + list(other.basis))

    def intersection(self, other):
        """Zassenhaus: rref of [[A, A], [B, 0]]; rows with zero left half span A ∩ B."""
        self._same(other)
        n = self.ambient_dim
        if not self.basis or not other.basis:
            return Subspace(n)
        stacked = [list(v) + list(v) for v in self.basis]
        stacked += [list(v) + [0] * n for v in other.basis]
        red, _ = rref(stacked)
        out = [r[n:] for r in red if all(x == 0 for x in r[:n]) and any(x != 0 for x in r[n:])]
        return Subspace(n, out)

    def contains(self, other):
        """True iff ``other`` is a subspace of ``self``."""
        self._same(other)
        return (self + other).dim == self.dim

    def contains_vector(self, v):
        return self.contains(Subspace(self.ambient_dim, [v]))

    def orthogonal(self):
        """The annihilator {x : <x, b> = 0 for all basis b}."""
        n = self.ambient_dim
        if not self.basis:
            return Subspace.full(n)
        return Subspace(n, nullspace(self.basis, n))

    def coordinates_of(self, v):
        """Coefficients of v in the echelon basis (v must lie in the subspace)."""
        v = [Fraction(x) for x in v]
        coeffs = [v[c] for c in self.pivots]
        recon = [sum(c * b[i] for c, b in zip(coeffs, self.basis)) for i in range(self.ambient_dim)]
        if recon != v:
            raise ValueError("vector not in subspace")
        return coeffs

    def image(self, linear_map, target_dim):
        """Image under a function sending a vector to a vector of length target_dim."""
        return Subspace(target_dim, [linear_map(list(b)) for b in self.basis])

    def integral_basis(self):
        """Basis rows scaled to primitive integer vectors (not saturated)."""
        out = []
        for b in self.basis:
            den = 1
            for x in b:
                den = den * x.denominator // _gcd(den, x.denominator)
            row = [int(x * den) for x in b]
            g = 0
            for x in row:
                g = _gcd(g, abs(x))
            out.append([x // g for x in row] if g > 1 else row)
        return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def subspace_ops(a, b):
    """Sum, intersection and containment (a ⊇ b) of two subspaces."""
    a._same(b)
    s = a + b
    return {"sum": s, "intersection": a.intersection(b), "contains": s == a}
