"""Block-placement homomorphisms H -> G and their derivatives."""

import random
from fractions import Fraction

from ..linalg import ExactMatrix, rank
from .parabolic import lie_algebra
from .scheme import BudgetExceeded, Scheme


class EmbeddingError(ValueError):
    pass


class Placement:
    __slots__ = ("kind", "target", "source", "character", "value")

    def __init__(self, kind, target, source=None, character=None, value=None):
        if kind not in ("block", "char", "const"):
            raise ValueError(f"unknown placement kind {kind!r}")
        self.kind = kind
        self.target = tuple(target) if kind == "block" else int(target)
        self.source = tuple(source) if source is not None else None
        self.character = character
        self.value = value
        if kind == "block" and len(self.target) != len(self.source):
            raise ValueError("block placement: target and source sizes differ")

    @classmethod
    def block(cls, target, source):
        return cls("block", target, source)

    @classmethod
    def char(cls, target, character):
        return cls("char", target, character=character)

    @classmethod
    def const(cls, target, value=1):
        return cls("const", target, value=int(value))

    def to_spec(self):
        if self.kind == "block":
            return {"kind": "block", "target": list(self.target), "source": list(self.source)}
        if self.kind == "char":
            return {"kind": "char", "target": self.target, "character": self.character.to_spec()}
        return {"kind": "const", "target": self.target, "value": self.value}

    @classmethod
    def from_spec(cls, spec, source_group):
        k = spec["kind"]
        if k == "block":
            return cls.block(spec["target"], spec["source"])
        if k == "char":
            return cls.char(spec["target"], source_group.character_from_spec(spec["character"]))
        if k == "const":
            return cls.const(spec["target"], spec.get("value", 1))
        raise ValueError(f"unknown placement kind {k!r}")


def _bracket(x, y, n):
    out = [Fraction(0)] * (n * n)
    for i in range(n):
        for k in range(n):
            a = x[i * n + k]
            b = y[i * n + k]
            if a == 0 and b == 0:
                continue
            for j in range(n):
                out[i * n + j] += a * y[k * n + j] - b * x[k * n + j]
    return out


class EmbeddingMap:
    """iota: source -> target given by placement rules (checked at construction)."""

    def __init__(self, source, target, placements, check=True, primes=(3, 5), samples=50, seed=0):
        self.source = source
        self.target = target
        self.placements = list(placements)
        covered = set()
        for pl in self.placements:
            tgt = pl.target if pl.kind == "block" else (pl.target,)
            for t in tgt:
                if t in covered or not 0 <= t < target.n:
                    raise EmbeddingError(f"target index {t} placed twice or out of range")
                covered.add(t)
        if covered != set(range(target.n)):
            raise EmbeddingError(f"target indices {sorted(set(range(target.n)) - covered)} unplaced")
        self._lie_rows = None
        if check:
            self.self_check(primes, samples, seed)

    # -- point maps ----------------------------------------------------
    def image_flat(self, flat, p=None, m=None):
        """Image of a flat source matrix: exact (p is None) or mod m = p^N."""
        nH, nG = self.source.n, self.target.n
        out = [0] * (nG * nG)
        for pl in self.placements:
            if pl.kind == "block":
                for a, ta in zip(pl.source, pl.target):
                    for b, tb in zip(pl.source, pl.target):
                        out[ta * nG + tb] = flat[a * nH + b]
            elif pl.kind == "char":
                if p is None:
                    v = pl.character.evaluate(flat, nH)
                else:
                    v = pl.character.evaluate_mod(flat, nH, p, m)
                out[pl.target * nG + pl.target] = v
            else:
                out[pl.target * nG + pl.target] = pl.value if m is None else pl.value % m
        return tuple(out) if p is None else tuple(x % m for x in out)

    def apply(self, mat):
        if mat.ring is None:
            flat = self.image_flat(mat.flat())
            return ExactMatrix.from_flat(flat, self.target.n)
        q, N = mat.ring
        flat = self.image_flat(mat.flat(), q, q ** N)
        return ExactMatrix.from_flat(flat, self.target.n, mat.ring)

    # -- Lie map -------------------------------------------------------
    def lie_image(self, x):
        nH, nG = self.source.n, self.target.n
        out = [Fraction(0)] * (nG * nG)
        for pl in self.placements:
            if pl.kind == "block":
                for a, ta in zip(pl.source, pl.target):
                    for b, tb in zip(pl.source, pl.target):
                        out[ta * nG + tb] = Fraction(x[a * nH + b])
            elif pl.kind == "char":
                d = pl.character.derivative(nH)
                out[pl.target * nG + pl.target] = sum(Fraction(c) * xi for c, xi in zip(d, x) if c)
        return out

    def lie_matrix(self):
        """Matrix of d(iota): column k is the image of the k-th source coordinate."""
        if self._lie_rows is None:
            nH = self.source.n
            cols = [self.lie_image([int(i == k) for i in range(nH * nH)]) for k in range(nH * nH)]
            self._lie_rows = [list(r) for r in zip(*cols)]
        return self._lie_rows

    def lie_map_subspace(self, space):
        return space.image(self.lie_image, self.target.n ** 2)

    def is_injective(self):
        lh = lie_algebra(self.source)
        imgs = [self.lie_image(b) for b in lh.basis]
        return rank(imgs) == lh.dim if imgs else True

    # -- checks ----------------------------------------------------------
    def self_check(self, primes=(3, 5), samples=50, seed=0):
        nH, nG = self.source.n, self.target.n
        ident = tuple(int(i % (nH + 1) == 0) for i in range(nH * nH))
        img = self.image_flat(ident)
        if any(img[i] != int(i % (nG + 1) == 0) for i in range(nG * nG)):
            raise EmbeddingError("identity is not mapped to the identity")
        lh = lie_algebra(self.source)
        lg = lie_algebra(self.target)
        basis = [list(b) for b in lh.basis]
        images = [self.lie_image(b) for b in basis]
        for im in images:
            if not lg.contains_vector(im):
                raise EmbeddingError("d(iota) leaves the target Lie algebra")
        for a in range(len(basis)):
            for b in range(a + 1, len(basis)):
                lhs = self.lie_image(_bracket(basis[a], basis[b], nH))
                rhs = _bracket(images[a], images[b], nG)
                if lhs != rhs:
                    raise EmbeddingError("d(iota) does not preserve brackets")
        if images and rank(images) != len(images):
            raise EmbeddingError("d(iota) is not injective")
        rng = random.Random(seed)
        tgt_scheme = Scheme.of_group(self.target)
        for q in primes:
            if self.source.odd_only() and q == 2:
                continue
            pts = sample_points(self.source, q, samples, rng)
            for g1 in pts:
                im1 = self.image_flat(g1, q, q)
                if not tgt_scheme.contains_mod(im1, q, 1):
                    raise EmbeddingError(f"iota(h) is not in the target group mod {q}")
            for g1, g2 in zip(pts, pts[1:] + pts[:1]):
                prod = _mul(g1, g2, nH, q)
                lhs = _mul(self.image_flat(g1, q, q), self.image_flat(g2, q, q), nG, q)
                if lhs != self.image_flat(prod, q, q):
                    raise EmbeddingError(f"iota is not multiplicative mod {q}")
        return True

    def to_spec(self):
        return [pl.to_spec() for pl in self.placements]


def _mul(a, b, n, m):
    from .. import kernels
    return kernels.mat_mul(tuple(a), tuple(b), n, m)


def sample_points(g, q, count, rng, tries=20000):
    """Random points of G(F_q): rejection sampling, falling back to enumeration."""
    scheme = Scheme.of_group(g)
    n = g.n
    support = g.flat_support
    out = []
    for _ in range(tries):
        flat = [0] * (n * n)
        for pos in support:
            flat[pos] = rng.randrange(q)
        if scheme.contains_mod(flat, q, 1):
            out.append(tuple(flat))
            if len(out) == count:
                return out
    try:
        pts = scheme.points(q, 1, budget=200000)
    except BudgetExceeded:
        pts = []
    if not pts:
        if out:
            return out
        raise EmbeddingError(f"could not sample points of {g!r} over F_{q}")
    return [pts[rng.randrange(len(pts))] for _ in range(count)]


def embedding_lie_map(e):
    """Matrix of d(iota) together with the result of the construction-time checks."""
    return {"matrix": e.lie_matrix(), "injective": e.is_injective(), "checked": e.self_check()}
