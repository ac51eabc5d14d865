"""Maximal torus quotients: generating characters and the Lie algebra of C."""

from .parabolic import lie_algebra


def torus_quotient(h):
    """Generating characters of the maximal torus quotient of h."""
    return list(h.torus_quotient())


def torus_differential(h, chars=None):
    """Linear map X -> (d chi_1(X), ..., d chi_k(X)) on flattened Lie coordinates."""
    chars = torus_quotient(h) if chars is None else chars
    rows = [c.derivative(h.n) for c in chars]

    def d_pi(x):
        return [sum(c * xi for c, xi in zip(r, x) if c) for r in rows]

    return d_pi


def lie_c(h, chars=None):
    """Lie(C) as the image of Lie(h) in Q^k."""
    chars = torus_quotient(h) if chars is None else chars
    return lie_algebra(h).image(torus_differential(h, chars), len(chars))
