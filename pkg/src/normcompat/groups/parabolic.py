"""Cocharacters of the diagonal torus, the parabolic data they cut out, and
mirabolic subgroups Q^0 = N . L^0."""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from ..linalg import ExactMatrix, Subspace
from .scheme import Scheme


class Cocharacter:
    """eta = (eta_0, ..., eta_{n-1}); tau = eta(p) = diag(p^eta_i)."""

    def __init__(self, eta):
        self.eta = tuple(int(x) for x in eta)
        self.n = len(self.eta)

    def weight(self, i, j):
        return self.eta[i] - self.eta[j]

    def tau(self, p, power=1):
        return ExactMatrix.diagonal([Fraction(p) ** (power * e) for e in self.eta])

    def positive_weights(self, g):
        return sorted({self.weight(i, j) for i, j in g.support_set if self.weight(i, j) > 0})

    def max_weight(self, g):
        return max(self.positive_weights(g), default=0)

    def check(self, g):
        """eta has the right length and eta(x) lies in G (tested at x = 2 and x = 3)."""
        if self.n != g.n:
            raise ValueError(f"cocharacter length {self.n} differs from ambient size {g.n}")
        for x in (2, 3):
            flat = [Fraction(0)] * (g.n * g.n)
            for i, e in enumerate(self.eta):
                flat[i * g.n + i] = Fraction(x) ** e
            if any(f(flat) != 0 for f in g.equations()):
                raise ValueError(f"eta({x}) is not a point of the group")
        return True

    def __eq__(self, other):
        return isinstance(other, Cocharacter) and self.eta == other.eta

    def __hash__(self):
        return hash(self.eta)

    def __repr__(self):
        return f"Cocharacter{self.eta}"


@dataclass
class ParabolicSplit:
    lie_g: Subspace
    lie_n: Subspace
    lie_l: Subspace
    lie_nbar: Subspace
    lie_q: Subspace
    lie_qbar: Subspace
    positive: dict = field(default_factory=dict)   # (i, j) -> weight > 0

    def check(self):
        parts = [self.lie_n, self.lie_l, self.lie_nbar]
        if sum(s.dim for s in parts) != self.lie_g.dim:
            return False
        for a in range(3):
            for b in range(a + 1, 3):
                if parts[a].intersection(parts[b]).dim:
                    return False
        return (self.lie_n + self.lie_l + self.lie_nbar) == self.lie_g


def lie_algebra(g):
    return _lie_cache(g)


_LIE = {}


def _lie_cache(g):
    key = repr(g.to_spec())
    if key not in _LIE:
        _LIE[key] = Scheme.of_group(g).lie_algebra()
    return _LIE[key]


def weight_positions(g, eta, sign):
    n = g.n
    out = []
    for i, j in sorted(g.support_set):
        w = eta.weight(i, j)
        if (sign > 0 and w > 0) or (sign < 0 and w < 0) or (sign == 0 and w == 0):
            out.append(i * n + j)
    return out


def parabolic_split(g, eta):
    eta = eta if isinstance(eta, Cocharacter) else Cocharacter(eta)
    if eta.n != g.n:
        raise ValueError("cocharacter incompatible with ambient size")
    lg = lie_algebra(g)
    N2 = g.n * g.n
    pos = Subspace.coordinate(N2, weight_positions(g, eta, 1))
    zer = Subspace.coordinate(N2, weight_positions(g, eta, 0))
    neg = Subspace.coordinate(N2, weight_positions(g, eta, -1))
    lie_n = lg.intersection(pos)
    lie_l = lg.intersection(zer)
    lie_nbar = lg.intersection(neg)
    positive = {(i, j): eta.weight(i, j) for i, j in g.support_set if eta.weight(i, j) > 0}
    return ParabolicSplit(lg, lie_n, lie_l, lie_nbar, lie_l + lie_n, lie_l + lie_nbar, positive)


def levi_blocks(g, eta):
    """Index classes linked by weight-zero support positions."""
    parent = list(range(g.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in g.support_set:
        if eta.weight(i, j) == 0:
            parent[find(i)] = find(j)
    blocks = {}
    for i in range(g.n):
        blocks.setdefault(find(i), []).append(i)
    return sorted(tuple(b) for b in blocks.values())


class LeviSub:
    """L^0 inside a Levi: trivial ({1}), full (L), or an intersection of character kernels."""

    def __init__(self, kind, characters=()):
        if kind not in ("trivial", "full", "kernel"):
            raise ValueError(f"unknown Levi subgroup kind {kind!r}")
        self.kind = kind
        self.characters = tuple(characters)

    @classmethod
    def trivial(cls):
        return cls("trivial")

    @classmethod
    def full(cls):
        return cls("full")

    @classmethod
    def kernel(cls, chars):
        return cls("kernel", chars)

    def __eq__(self, other):
        return (isinstance(other, LeviSub) and self.kind == other.kind
                and self.characters == other.characters)

    def __hash__(self):
        return hash((self.kind, self.characters))

    def __repr__(self):
        if self.kind == "kernel":
            return f"LeviSub(kernel {list(self.characters)})"
        return f"LeviSub({self.kind})"

    def lie(self, g, split):
        if self.kind == "trivial":
            return Subspace.zero(g.n * g.n)
        if self.kind == "full":
            return split.lie_l
        N2 = g.n * g.n
        rows = [list(c.derivative(g.n)) for c in self.characters]
        ker = Subspace(N2, rows).orthogonal()
        return split.lie_l.intersection(ker)

    def contains_levi_mod(self, flat, n, levi_positions, p, depth):
        """Levi matrix (flat residues, other entries ignored) lies in L^0 mod p^depth."""
        if depth <= 0 or self.kind == "full":
            return True
        m = p ** depth
        if self.kind == "trivial":
            for pos in levi_positions:
                if (flat[pos] - (1 if pos % (n + 1) == 0 else 0)) % m:
                    return False
            return True
        for c in self.characters:
            if (c.evaluate_mod(flat, n, p, m) - 1) % m:
                return False
        return True

    def is_subset_of(self, other):
        """Sufficient syntactic test for L^0 ⊆ other (used for monotonicity checks)."""
        if other.kind == "full" or self.kind == "trivial":
            return True
        if self.kind == "full":
            return other.kind == "full"
        return other.kind == "kernel" and set(other.characters) <= set(self.characters)

    def to_spec(self):
        d = {"kind": self.kind}
        if self.kind == "kernel":
            d["characters"] = [c.to_spec() for c in self.characters]
        return d

    @classmethod
    def from_spec(cls, spec, g):
        kind = spec["kind"]
        if kind == "kernel":
            return cls(kind, [g.character_from_spec(c) for c in spec["characters"]])
        return cls(kind)


class MirabolicDescriptor:
    """Q^0 = N . L^0 for the parabolic Q (non-negative weights) of a cocharacter."""

    def __init__(self, group, eta, levi_sub, opposite=False):
        self.group = group
        self.eta = eta if isinstance(eta, Cocharacter) else Cocharacter(eta)
        self.levi_sub = levi_sub
        self.opposite = opposite
        self.eta.check(group)

    @cached_property
    def split(self):
        return parabolic_split(self.group, self.eta)

    @cached_property
    def lie(self):
        nil = self.split.lie_nbar if self.opposite else self.split.lie_n
        return nil + self.levi_sub.lie(self.group, self.split)

    @property
    def dim(self):
        return self.lie.dim

    def levi_positions(self):
        return weight_positions(self.group, self.eta, 0)

    @cached_property
    def scheme(self):
        g = self.group
        base = Scheme.of_group(g)
        zero_sign = 1 if self.opposite else -1
        fixed = {pos: 0 for pos in weight_positions(g, self.eta, zero_sign)}
        eqs = []
        if self.levi_sub.kind == "trivial":
            for pos in self.levi_positions():
                fixed[pos] = 1 if pos % (g.n + 1) == 0 else 0
        elif self.levi_sub.kind == "kernel":
            for c in self.levi_sub.characters:
                num, den = c.num_den(g.n)
                eqs.append(num - den)
        return base.restricted(fixed=fixed, equations=eqs, label="mirabolic")

    def contains(self, mat, p=None):
        g = self.group
        if not g.contains(mat, p):
            return False
        n = g.n
        flat = mat.flat()
        zero_sign = 1 if self.opposite else -1
        if any(flat[pos] != 0 for pos in weight_positions(g, self.eta, zero_sign)):
            return False
        if self.levi_sub.kind == "trivial":
            return all(flat[pos] == (1 if pos % (n + 1) == 0 else 0) for pos in self.levi_positions())
        if self.levi_sub.kind == "kernel":
            if mat.ring is None:
                return all(c.evaluate(flat, n) == 1 for c in self.levi_sub.characters)
            q, N = mat.ring
            return all(c.evaluate_mod(flat, n, q, q ** N) == 1 for c in self.levi_sub.characters)
        return True

    def to_spec(self):
        return {"eta": list(self.eta.eta), "levi_sub": self.levi_sub.to_spec()}
