"""The ordinary idempotent e = lim T^{n!} over Z/p^M."""

from .. import kernels
from ..linalg import ExactMatrix


def _as_residue(t, p=None, M=None):
    if isinstance(t, ExactMatrix):
        if t.ring is None:
            if p is None or M is None:
                raise ValueError("a rational matrix needs p and M")
            t = t.reduce(p, M)
        return t
    if p is None or M is None:
        raise ValueError("an integer matrix needs p and M")
    return ExactMatrix(t, (p, M))


def _power(flat, k, n, m):
    out = tuple(int(i % (n + 1) == 0) for i in range(n * n))
    base = flat
    while k:
        if k & 1:
            out = kernels.mat_mul(out, base, n, m)
        base = kernels.mat_mul(base, base, n, m)
        k >>= 1
    return out


def ordinary_projector(t, p=None, M=None, max_steps=10 ** 4):
    """Iterate e <- e^(n+1) from e = t until e is idempotent.

    Once t^{n!} is idempotent every later t^{N!} equals it, so the first
    idempotent in the sequence is the limit.
    """
    t = _as_residue(t, p, M)
    if not t.is_square():
        raise ValueError("T must be square")
    n, m = t.rows, t.modulus
    e = tuple(t.flat())
    for step in range(2, max_steps):
        if kernels.mat_mul(e, e, n, m) == e:
            return ExactMatrix.from_flat(e, n, t.ring)
        e = _power(e, step, n, m)
    raise RuntimeError("T^{n!} did not stabilize")


def projector_properties(t, e):
    """e^2 = e, eT = Te, and T invertible on the image of e."""
    n, m = t.rows, t.modulus
    p = t.ring[0]
    ef, tf = tuple(e.flat()), tuple(t.flat())
    idem = kernels.mat_mul(ef, ef, n, m) == ef
    commute = kernels.mat_mul(ef, tf, n, m) == kernels.mat_mul(tf, ef, n, m)
    # T e + (1 - e) acts as T on im(e) and as 1 on ker(e).
    one = tuple(int(i % (n + 1) == 0) for i in range(n * n))
    te = kernels.mat_mul(tf, ef, n, m)
    s = tuple((a + b - c) % m for a, b, c in zip(te, one, ef))
    invertible = kernels.mat_det(s, n, m) % p != 0
    return {"idempotent": idem, "commutes": commute, "invertible_on_image": invertible}
