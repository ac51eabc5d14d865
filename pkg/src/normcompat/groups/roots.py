"""Root spaces for the diagonal torus and one-parameter root subgroups."""

from fractions import Fraction
from math import factorial

from ..linalg import Subspace
from ..linalg.lattice import saturate
from .parabolic import lie_algebra


class Root:
    __slots__ = ("positions", "vector", "weight", "key", "nilpotency")

    def __init__(self, positions, vector, weight, key, nilpotency):
        self.positions = positions   # flat positions in the root space's support
        self.vector = vector         # primitive integer root vector (flat, length n^2)
        self.weight = weight         # <eta, alpha>
        self.key = key
        self.nilpotency = nilpotency

    def __repr__(self):
        return f"Root(w={self.weight}, pos={self.positions})"


def _matmul_frac(a, b, n):
    out = [0] * (n * n)
    for i in range(n):
        for k in range(n):
            x = a[i * n + k]
            if x:
                for j in range(n):
                    out[i * n + j] += x * b[k * n + j]
    return out


def root_system(g, eta):
    """Roots of g (w.r.t. its diagonal torus) in a fixed global order.

    Order: by eta-weight (negative first), then by leading position.
    """
    return _roots(repr(g.to_spec()), g, eta.eta)


_CACHE = {}


def _roots(key, g, eta_t):
    ck = (key, eta_t)
    if ck in _CACHE:
        return _CACHE[ck]
    n = g.n
    lg = lie_algebra(g)
    diag = Subspace.coordinate(n * n, [i * (n + 1) for i in range(n)])
    lt = lg.intersection(diag)
    tb = [list(b) for b in lt.basis]
    groups = {}
    for i, j in sorted(g.support_set):
        if i == j:
            continue
        sig = tuple(b[i * (n + 1)] - b[j * (n + 1)] for b in tb)
        groups.setdefault(sig, []).append(i * n + j)
    roots = []
    for sig, positions in groups.items():
        space = lg.intersection(Subspace.coordinate(n * n, positions))
        for vec in saturate(space):
            support = [pos for pos, x in enumerate(vec) if x]
            i, j = divmod(support[0], n)
            w = eta_t[i] - eta_t[j]
            if any(eta_t[q // n] - eta_t[q % n] != w for q in support):
                raise ValueError("root space mixes eta-weights")
            power = [Fraction(x) for x in vec]
            k = 1
            while any(power):
                power = _matmul_frac(power, vec, n)
                k += 1
                if k > n + 1:
                    raise ValueError("root vector is not nilpotent")
            roots.append(Root(tuple(support), tuple(vec), w, (w, support[0]), k - 1))
    roots.sort(key=lambda r: r.key)
    _CACHE[ck] = roots
    return roots


def root_element_exact(root, s, n):
    """exp(s X_alpha) as a flat tuple of Fractions."""
    x = [Fraction(v) for v in root.vector]
    out = [Fraction(int(i % (n + 1) == 0)) for i in range(n * n)]
    power = list(out)
    for k in range(1, root.nilpotency + 1):
        power = _matmul_frac(power, x, n)
        c = Fraction(s) ** k / factorial(k)
        out = [a + c * b for a, b in zip(out, power)]
    return tuple(out)


def root_element(root, s, n, p, m):
    """exp(s X_alpha) mod m as a flat residue tuple (s an integer)."""
    res = []
    for v in root_element_exact(root, s, n):
        if v.denominator % p == 0:
            raise ValueError("root exponential is not p-integral")
        res.append(v.numerator * pow(v.denominator, -1, m) % m)
    return tuple(res)


def cocharacter_basis(g):
    """Integer basis of the cocharacter lattice of the diagonal torus of g."""
    n = g.n
    lg = lie_algebra(g)
    diag = Subspace.coordinate(n * n, [i * (n + 1) for i in range(n)])
    return [tuple(int(v[i * (n + 1)]) for i in range(n)) for v in saturate(lg.intersection(diag))]
