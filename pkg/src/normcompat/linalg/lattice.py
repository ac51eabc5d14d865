"""Integer lattices: Smith invariants, saturated kernels, degeneracy primes."""

from fractions import Fraction

from sympy import factorint

from .echelon import rank
from .subspace import Subspace


def _as_int_rows(m):
    rows = m.rows_list() if hasattr(m, "rows_list") else [list(r) for r in m]
    out = []
    for r in rows:
        row = []
        for x in r:
            x = Fraction(x)
            if x.denominator != 1:
                raise ValueError("integer matrix required")
            row.append(int(x))
        out.append(row)
    return out


def smith_invariants(m):
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    a = _as_int_rows(m)
    if not a:
        return []
    nr, nc = len(a), len(a[0])
    inv = []
    t = 0
    while t < min(nr, nc):
        piv = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            done = True
            pv = a[t][t]
            for i in range(t + 1, nr):
                q = a[i][t] // pv
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, nc):
                q = a[t][j] // pv
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                if a[t][j]:
                    done = False
            if done:
                bad = None
                for i in range(t + 1, nr):
                    for j in range(t + 1, nc):
                        if a[i][j] % pv:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad])]
                continue
            best = None
            piv = None
            for i in range(t, nr):
                if a[i][t] and (best is None or abs(a[i][t]) < best):
                    best, piv = abs(a[i][t]), ("r", i)
            for j in range(t, nc):
                if a[t][j] and (best is None or abs(a[t][j]) < best):
                    best, piv = abs(a[t][j]), ("c", j)
            kind, k = piv
            if kind == "r":
                a[t], a[k] = a[k], a[t]
            else:
                for r in a:
                    r[t], r[k] = r[k], r[t]
        inv.append(abs(a[t][t]))
        t += 1
    return inv


def integer_left_kernel(rows):
    """Saturated Z-basis of {y in Z^m : y A = 0} for an m x n integer matrix A.

    Unimodular row reduction of [A | I]; the identity-half of rows whose
    A-half vanishes is the kernel basis (rows of a unimodular matrix, hence
    saturated).
    """
    a = [list(r) for r in _as_int_rows(rows)]
    m = len(a)
    if m == 0:
        return []
    n = len(a[0])
    w = [r + [int(i == j) for j in range(m)] for i, r in enumerate(a)]
    top = 0
    for c in range(n):
        while True:
            nz = [i for i in range(top, m) if w[i][c]]
            if not nz:
                break
            k = min(nz, key=lambda i: abs(w[i][c]))
            w[top], w[k] = w[k], w[top]
            rest = False
            for i in range(top + 1, m):
                if w[i][c]:
                    q = w[i][c] // w[top][c]
                    w[i] = [x - q * y for x, y in zip(w[i], w[top])]
                    if w[i][c]:
                        rest = True
            if not rest:
                top += 1
                break
        if top == m:
            break
    return [r[n:] for r in w if all(x == 0 for x in r[:n])]


def integer_kernel(rows, ncols):
    """Saturated Z-basis of {x in Z^n : A x = 0}."""
    rows = _as_int_rows(rows) if rows else []
    if not rows:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    cols = [list(c) for c in zip(*rows)]
    return integer_left_kernel(cols)


def saturate(space):
    """Z-basis of the lattice space ∩ Z^n for a rational subspace."""
    n = space.ambient_dim
    if space.dim == 0:
        return []
    perp = space.orthogonal()
    return integer_kernel(perp.integral_basis(), n)


def prime_divisors(n):
    n = abs(int(n))
    if n <= 1:
        return set()
    return set(factorint(n))


def integral_degeneracy_primes(m, generic_rank):
    """Primes p with rank(m mod p) < generic_rank, for an integer matrix m."""
    rows = _as_int_rows(m)
    if rank(rows) != generic_rank:
        raise ValueError(f"rational rank {rank(rows)} differs from generic rank {generic_rank}")
    inv = smith_invariants(rows)[:generic_rank]
    out = set()
    for d in inv:
        out |= prime_divisors(d)
    return out


def saturated_subspace_basis(vectors, n):
    return saturate(Subspace(n, vectors))
