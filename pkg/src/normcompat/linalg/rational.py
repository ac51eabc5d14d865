"""Arbitrary-precision rationals: thin helpers around :class:`fractions.Fraction`."""

from fractions import Fraction

Rational = Fraction


def to_rational(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def vp(x, p):
    """p-adic valuation of a rational; ``None`` stands for +infinity (x == 0)."""
    x = to_rational(x)
    if x == 0:
        return None
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def vp_int(x, p, cap):
    """Valuation of an integer residue, capped at ``cap`` (used for x == 0 mod p^cap)."""
    if x == 0:
        return cap
    v = 0
    while v < cap and x % p == 0:
        x //= p
        v += 1
    return v


def is_p_integral(x, p):
    return to_rational(x).denominator % p != 0


def reduce_mod(x, m):
    """Image of a p-integral rational in Z/m (m a prime power)."""
    x = to_rational(x)
    return x.numerator * pow(x.denominator, -1, m) % m
