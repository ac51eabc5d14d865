"""Flat residue-matrix helpers over Z/p^D."""

from fractions import Fraction

from . import kernels


class PrecisionError(ArithmeticError):
    """A residue computation needed more p-adic precision than was carried."""


def identity(n):
    return tuple(int(i % (n + 1) == 0) for i in range(n * n))


def mul(a, b, n, m):
    return kernels.mat_mul(a, b, n, m)


def inv(a, n, p, m):
    out = kernels.mat_inv(a, n, p, m)
    if out is None:
        raise ArithmeticError("matrix is not invertible mod p")
    return out


def prod(mats, n, m):
    out = identity(n)
    for x in mats:
        out = kernels.mat_mul(out, x, n, m)
    return out


def from_rational(flat, p, m):
    """Residues of a p-integral rational flat matrix."""
    out = []
    for x in flat:
        x = Fraction(x)
        if x.denominator % p == 0:
            raise ValueError("entry is not p-integral")
        out.append(x.numerator * pow(x.denominator, -1, m) % m)
    return tuple(out)


def reduce(flat, m):
    return tuple(x % m for x in flat)


def val(x, p, cap):
    """v_p of an integer residue, capped at ``cap`` (0 counts as cap)."""
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def det(a, n, m):
    return kernels.mat_det(a, n, m)
