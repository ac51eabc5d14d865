"""Reduced row-echelon forms and kernels over Q and over prime fields."""

from fractions import Fraction


def _rows(m):
    if hasattr(m, "rows_list"):
        return m.rows_list()
    return [list(r) for r in m]


def rref(rows):
    """RREF of a list of rational rows. Returns (rows, pivots)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(a)):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        if inv != 1:
            a[r] = [x * inv for x in a[r]]
        rowr = a[r]
        for i in range(len(a)):
            if i != r:
                f = a[i][c]
                if f != 0:
                    a[i] = [x - f * y for x, y in zip(a[i], rowr)]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rref_rank(m):
    """(rref matrix, rank, pivot columns) of a rational matrix."""
    from .matrix import ExactMatrix

    rows = _rows(m)
    red, pivots = rref(rows)
    if isinstance(m, ExactMatrix):
        red_m = ExactMatrix(red if red else [[0] * m.cols for _ in range(m.rows)])
    else:
        red_m = red
    return red_m, len(pivots), pivots


def rank(rows):
    return len(rref(rows)[1])


def nullspace(rows, ncols=None):
    """Basis of {x : A x = 0} over Q, as a list of rows (one per free column)."""
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][f]
        basis.append(v)
    return basis


def rref_mod_p(rows, p):
    """RREF over F_p of integer rows. Returns (rows, pivots)."""
    a = [[x % p for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(a)):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        rowr = a[r]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], rowr)]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank_mod_p(rows, p):
    return len(rref_mod_p(rows, p)[1])


class ModPSolver:
    """Solve A x = b over F_p repeatedly for a fixed A (cached elimination)."""

    def __init__(self, rows, ncols, p):
        self.p = p
        self.ncols = ncols
        nr = len(rows)
        aug = [[x % p for x in r] + [int(i == j) for j in range(nr)] for i, r in enumerate(rows)]
        red, pivots = rref_mod_p(aug, p) if aug else ([], [])
        self.pivots = [c for c in pivots if c < ncols]
        rk = len(self.pivots)
        self.rank = rk
        self.transform = [row[ncols:] for row in red]
        self.reduced = [row[:ncols] for row in red]
        pivset = set(self.pivots)
        self.free = [c for c in range(ncols) if c not in pivset]
        self.kernel = []
        for f in self.free:
            v = [0] * ncols
            v[f] = 1
            for i, pc in enumerate(self.pivots):
                v[pc] = (-self.reduced[i][f]) % p
            self.kernel.append(v)

    def particular(self, b):
        """A particular solution of A x = b, or None if inconsistent."""
        p = self.p
        tb = [sum(t * y for t, y in zip(row, b)) % p for row in self.transform]
        for i in range(self.rank, len(tb)):
            if tb[i]:
                return None
        x = [0] * self.ncols
        for i, pc in enumerate(self.pivots):
            x[pc] = tb[i]
        return x
