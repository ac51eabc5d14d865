"""Characters built from determinants of diagonal blocks and similitude factors."""

from dataclasses import dataclass
from fractions import Fraction

from .poly import Poly, compile_program
from .. import kernels


@dataclass(frozen=True)
class CharTerm:
    kind: str                 # "det" or "sim"
    indices: tuple            # ambient indices of the block the term reads
    exponent: int
    form: tuple = None        # sim only: the alternating form on ``indices``

    def shift(self, offset):
        return CharTerm(self.kind, tuple(i + offset for i in self.indices), self.exponent, self.form)

    def remap(self, mapping):
        return CharTerm(self.kind, tuple(mapping[i] for i in self.indices), self.exponent, self.form)

    def base_poly(self, n):
        idx = self.indices
        k = len(idx)
        sub = [[Poly.var(idx[a] * n + idx[b]) for b in range(k)] for a in range(k)]
        if self.kind == "det":
            from .poly import sym_det
            return sym_det(sub)
        if self.kind == "sim":
            a, b = sim_anchor(self.form)
            jab = self.form[a][b]
            acc = Poly()
            for s in range(k):
                for t in range(k):
                    if self.form[s][t]:
                        acc = acc + self.form[s][t] * sub[s][a] * sub[t][b]
            return acc * jab   # jab = +-1, so multiplying equals dividing
        raise ValueError(f"unknown character kind {self.kind!r}")

    def to_spec(self):
        d = {"kind": self.kind, "indices": list(self.indices), "exponent": self.exponent}
        if self.form is not None:
            d["form"] = [list(r) for r in self.form]
        return d


def sim_anchor(form):
    for a, row in enumerate(form):
        for b, x in enumerate(row):
            if x:
                if x not in (1, -1):
                    raise ValueError("forms must have entries in {0, 1, -1}")
                return a, b
    raise ValueError("zero form")


class Character:
    """Product of block determinants and similitudes raised to integer powers."""

    __slots__ = ("terms", "_cache")

    def __init__(self, terms=()):
        self.terms = tuple(terms)
        self._cache = {}

    @classmethod
    def det(cls, indices, exponent=1):
        return cls([CharTerm("det", tuple(indices), exponent)])

    @classmethod
    def sim(cls, indices, form, exponent=1):
        form = tuple(tuple(int(x) for x in r) for r in form)
        return cls([CharTerm("sim", tuple(indices), exponent, form)])

    def __mul__(self, other):
        return Character(self.terms + other.terms)

    def __pow__(self, k):
        return Character(CharTerm(t.kind, t.indices, t.exponent * k, t.form) for t in self.terms)

    def inverse(self):
        return self ** -1

    def shift(self, offset):
        return Character(t.shift(offset) for t in self.terms)

    def remap(self, mapping):
        return Character(t.remap(mapping) for t in self.terms)

    def __eq__(self, other):
        return isinstance(other, Character) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        parts = []
        for t in self.terms:
            name = "det" if t.kind == "det" else "sim"
            parts.append(f"{name}{list(t.indices)}^{t.exponent}")
        return "*".join(parts) if parts else "1"

    def is_trivial(self):
        return not self.terms

    def max_index(self):
        return max((max(t.indices) for t in self.terms), default=-1)

    def _bases(self, n):
        key = ("bases", n)
        if key not in self._cache:
            polys = [t.base_poly(n) for t in self.terms]
            self._cache[key] = (polys, compile_program(polys))
        return self._cache[key]

    def num_den(self, n):
        """(numerator, denominator) polynomials of the rational function."""
        polys, _ = self._bases(n)
        num, den = Poly.const(1), Poly.const(1)
        for t, f in zip(self.terms, polys):
            for _ in range(abs(t.exponent)):
                if t.exponent > 0:
                    num = num * f
                else:
                    den = den * f
        return num, den

    def evaluate(self, x, n):
        """Value on a flat sequence of field elements (Fraction, dual numbers...)."""
        polys, _ = self._bases(n)
        val = Fraction(1)
        for t, f in zip(self.terms, polys):
            b = f(x)
            val = val * (b ** t.exponent if t.exponent >= 0 else (1 / b) ** (-t.exponent))
        return val

    def evaluate_mod(self, flat, n, p, m):
        """Value mod m = p^N on a flat residue matrix; raises if a base is not a unit."""
        _, prog = self._bases(n)
        vals = kernels.poly_eval(prog, flat, m)
        out = 1
        for t, b in zip(self.terms, vals):
            if t.exponent >= 0:
                out = out * pow(b, t.exponent, m) % m
            else:
                if b % p == 0:
                    raise ZeroDivisionError("character base is not a unit")
                out = out * pow(pow(b, -1, m), -t.exponent, m) % m
        return out

    def bases_mod(self, flat, n, m):
        _, prog = self._bases(n)
        return kernels.poly_eval(prog, flat, m)

    def derivative(self, n):
        """Differential at the identity as a linear functional on n^2 coordinates."""
        key = ("d", n)
        if key not in self._cache:
            polys, _ = self._bases(n)
            ident = [int(i % (n + 1) == 0) for i in range(n * n)]
            vec = [0] * (n * n)
            for t, f in zip(self.terms, polys):
                for v in f.variables():
                    vec[v] += t.exponent * f.diff(v)(ident)
            self._cache[key] = tuple(vec)
        return self._cache[key]

    def to_spec(self):
        return {"terms": [t.to_spec() for t in self.terms]}

    @classmethod
    def from_spec(cls, spec, form_lookup=None):
        terms = []
        for t in spec["terms"]:
            form = t.get("form")
            if t["kind"] == "sim" and form is None:
                if form_lookup is None:
                    raise ValueError("similitude term needs a form")
                form = form_lookup(tuple(t["indices"]))
            if form is not None:
                form = tuple(tuple(int(x) for x in r) for r in form)
            terms.append(CharTerm(t["kind"], tuple(int(i) for i in t["indices"]),
                                  int(t.get("exponent", 1)), form))
        return cls(terms)
