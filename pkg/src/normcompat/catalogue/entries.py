"""Indecomposable spherical pairs (g, h) with dim h = dim of the Borel flag variety of g."""

from dataclasses import dataclass, field

FAMILIES = ("sl", "so", "sp", "t", "e6", "e7", "e8", "f4", "g2")
_EXCEPTIONAL = {"e6": (78, 6), "e7": (133, 7), "e8": (248, 8), "f4": (52, 4), "g2": (14, 2)}


@dataclass(frozen=True, order=True)
class LieFactor:
    """A simple (or 1-dimensional abelian) Lie algebra; ``n`` is the matrix size for sl/so/sp."""
    family: str
    n: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown Lie family {self.family!r}")
        if self.family == "sp" and self.n % 2:
            raise ValueError("sp_n needs n even")
        if self.family in ("sl", "so", "sp") and self.n < 0:
            raise ValueError("negative size")

    @property
    def dim(self):
        f, n = self.family, self.n
        if f == "sl":
            return n * n - 1 if n else 0
        if f == "so":
            return n * (n - 1) // 2
        if f == "sp":
            k = n // 2
            return k * (2 * k + 1)
        if f == "t":
            return 1
        return _EXCEPTIONAL[f][0]

    @property
    def rank(self):
        f, n = self.family, self.n
        if f == "sl":
            return max(n - 1, 0)
        if f == "so":
            return n // 2
        if f == "sp":
            return n // 2
        if f == "t":
            return 1
        return _EXCEPTIONAL[f][1]

    @property
    def flag_dim(self):
        return (self.dim - self.rank) // 2 if self.family != "t" else 0

    def __str__(self):
        return f"{self.family}_{self.n}" if self.family in ("sl", "so", "sp") else self.family


def sl(n):
    return LieFactor("sl", n)


def so(n):
    return LieFactor("so", n)


def sp(n):
    return LieFactor("sp", n)


T = LieFactor("t")


def normalize(factors):
    """Small-rank coincidences: so3 = sp2 = sl2, so4 = sl2^2, so5 = sp4, so6 = sl4, so2 = t."""
    out = []
    for f in factors:
        key = (f.family, f.n)
        if key in (("so", 3), ("sp", 2)):
            out.append(sl(2))
        elif key == ("so", 4):
            out += [sl(2), sl(2)]
        elif key == ("so", 5):
            out.append(sp(4))
        elif key == ("so", 6):
            out.append(sl(4))
        elif key == ("so", 2):
            out.append(T)
        elif f.dim == 0:
            continue
        else:
            out.append(f)
    return sorted(out)


@dataclass
class CatalogueEntry:
    name: str
    g_factors: list
    h_factors: list
    kind: str                     # hecke-family | sporadic | eisenstein-candidate
    notes: str = ""
    n: int = None
    config: str = None            # name of a shipped matrix model, if any
    claims: dict = field(default_factory=dict)

    def label(self):
        g = " x ".join(str(f) for f in self.g_factors)
        h = " x ".join(str(f) for f in self.h_factors)
        return f"({g}, {h})"


@dataclass
class FamilyTemplate:
    name: str
    build: object                 # n -> (g_factors, h_factors)
    notes: str = ""
    configs: dict = field(default_factory=dict)
    kind: str = "hecke-family"

    def at(self, n):
        g, h = self.build(n)
        return CatalogueEntry(f"{self.name}[n={n}]", g, h, "hecke-family", self.notes, n,
                              self.configs.get(n))

    def label(self):
        return self.name

    @property
    def has_torus(self):
        return any(f.family == "t" for f in self.at(2).h_factors)


FAMILY_TEMPLATES = [
    FamilyTemplate("(sl_n x sl_{n+1}, sl_n x t)", lambda n: ([sl(n), sl(n + 1)], [sl(n), T]),
                   "GL_n inside GL_{n+1} x GL_n", {2: "diag-gl2", 3: "diag-gl3"}),
    FamilyTemplate("(so_n x so_{n+1}, so_n)", lambda n: ([so(n), so(n + 1)], [so(n)]),
                   "SO_n inside SO_n x SO_{n+1}", {2: "so-pair"}),
    FamilyTemplate("(sl_n, so_n)", lambda n: ([sl(n)], [so(n)])),
    FamilyTemplate("(sl_{2n+1}, sp_{2n})", lambda n: ([sl(2 * n + 1)], [sp(2 * n)])),
    FamilyTemplate("(so_{2n+1}, so_n x so_{n+1})",
                   lambda n: ([so(2 * n + 1)], [so(n), so(n + 1)])),
    FamilyTemplate("(so_{2n+1}, sl_n x t)", lambda n: ([so(2 * n + 1)], [sl(n), T]),
                   "anticyclotomic tower via U(n-1,1) inside SO(2n-1,2)"),
    FamilyTemplate("(sp_{2n}, sl_n x t)", lambda n: ([sp(2 * n)], [sl(n), T])),
    FamilyTemplate("(so_{2n}, so_n x so_n)", lambda n: ([so(2 * n)], [so(n), so(n)])),
]


def _sporadic(g, h, notes=""):
    e = CatalogueEntry("", g, h, "sporadic", notes)
    e.name = e.label()
    return e


SPORADIC = [
    _sporadic([sp(4), sp(4), sl(2)], [sl(2)] * 3),
    _sporadic([sp(4)] * 3, [sl(2)] * 4),
    _sporadic([sp(6), sp(4)], [sp(4), sl(2)]),
    _sporadic([sp(8), sp(4)], [sp(4), sp(4)]),
    _sporadic([sl(3), sp(4)], [sl(2), sl(2), T]),
    _sporadic([sl(4), sl(2)], [sl(2), sl(2), T]),
    _sporadic([sl(4), sp(4)], [sl(2)] * 3 + [T]),
    _sporadic([LieFactor("e6")], [sp(8)]),
    _sporadic([LieFactor("e7")], [sl(8)]),
    _sporadic([LieFactor("e8")], [so(16)]),
    _sporadic([LieFactor("f4")], [sp(6), sl(2)]),
    _sporadic([LieFactor("g2")], [sl(2), sl(2)]),
]

# Outcomes G' named for the Eisenstein search, as normalized factor lists.
EISENSTEIN_OUTCOMES = {
    "GL2 x GL2": [sl(2), sl(2)],
    "GSp4": [sp(4)],
    "GSp4 x GL2": [sl(2), sp(4)],
    "GL3 x GL1": [sl(3)],
    "GL4": [sl(4)],
    "GSp4 x GSp4": [sp(4), sp(4)],
}

# Matrix models linked to the Eisenstein outcomes they realize.
EISENSTEIN_CONFIGS = {"GL2 x GL2": "rankin-selberg", "GSp4": "gsp4-siegel",
                      "GSp4 x GL2": "gsp4-gl2", "GL3 x GL1": "gl3-gl1"}
