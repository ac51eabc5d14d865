# Compiled versions of the kernels in _pykernels; moduli must be below 2**31.

from libc.stdlib cimport malloc, free


cdef inline long long _md(long long x, long long m):
    x %= m
    if x < 0:
        x += m
    return x


cdef _check_square(tuple a, int n):
    # bounds checks are compiled out, so sizes are validated once up front
    if n < 0 or len(a) != n * n:
        raise ValueError(f"expected {n * n} entries, got {len(a)}")


def mat_mul(tuple a, tuple b, int n, long long m):
    cdef int i, j, k
    _check_square(a, n)
    _check_square(b, n)
    cdef long long s
    cdef long long *A = <long long *> malloc(n * n * sizeof(long long))
    cdef long long *B = <long long *> malloc(n * n * sizeof(long long))
    try:
        for i in range(n * n):
            A[i] = _md(a[i], m)
            B[i] = _md(b[i], m)
        out = []
        for i in range(n):
            for j in range(n):
                s = 0
                for k in range(n):
                    s = (s + A[i * n + k] * B[k * n + j]) % m
                out.append(s)
        return tuple(out)
    finally:
        free(A)
        free(B)


cdef long long _inv(long long a, long long m):
    cdef long long t = 0, nt = 1, r = m, nr = a % m, q, tmp
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += m
    return t


def mat_inv(tuple a, int n, long long p, long long m):
    cdef int i, j, r, c, piv, w2 = 2 * n
    cdef long long f, inv, tmp
    _check_square(a, n)
    cdef long long *W = <long long *> malloc(n * w2 * sizeof(long long))
    try:
        for i in range(n):
            for j in range(n):
                W[i * w2 + j] = _md(a[i * n + j], m)
                W[i * w2 + n + j] = 1 if i == j else 0
        for c in range(n):
            piv = -1
            for r in range(c, n):
                if W[r * w2 + c] % p != 0:
                    piv = r
                    break
            if piv < 0:
                return None
            if piv != c:
                for j in range(w2):
                    tmp = W[c * w2 + j]
                    W[c * w2 + j] = W[piv * w2 + j]
                    W[piv * w2 + j] = tmp
            inv = _inv(W[c * w2 + c], m)
            for j in range(w2):
                W[c * w2 + j] = W[c * w2 + j] * inv % m
            for r in range(n):
                if r != c:
                    f = W[r * w2 + c]
                    if f != 0:
                        for j in range(w2):
                            W[r * w2 + j] = _md(W[r * w2 + j] - f * W[c * w2 + j] % m, m)
        return tuple([W[i * w2 + n + j] for i in range(n) for j in range(n)])
    finally:
        free(W)


def mat_det(tuple a, int n, long long m):
    """Determinant mod m by unit-pivot elimination; -1 if a unit pivot is missing."""
    cdef int i, j, r, c, piv
    cdef long long f, inv, tmp, det = 1
    _check_square(a, n)
    cdef long long *W = <long long *> malloc(n * n * sizeof(long long))
    try:
        for i in range(n * n):
            W[i] = _md(a[i], m)
        for c in range(n):
            piv = -1
            for r in range(c, n):
                if W[r * n + c] != 0 and _gcd(W[r * n + c], m) == 1:
                    piv = r
                    break
            if piv < 0:
                return -1
            if piv != c:
                det = _md(-det, m)
                for j in range(n):
                    tmp = W[c * n + j]
                    W[c * n + j] = W[piv * n + j]
                    W[piv * n + j] = tmp
            det = det * W[c * n + c] % m
            inv = _inv(W[c * n + c], m)
            for r in range(c + 1, n):
                f = W[r * n + c] * inv % m
                if f != 0:
                    for j in range(c, n):
                        W[r * n + j] = _md(W[r * n + j] - f * W[c * n + j] % m, m)
        return det
    finally:
        free(W)


cdef long long _gcd(long long a, long long b):
    cdef long long t
    while b != 0:
        t = a % b
        a = b
        b = t
    return a


def poly_eval(tuple prog, tuple x, long long m):
    cdef tuple counts = prog[0]
    cdef tuple coefs = prog[1]
    cdef tuple lens = prog[2]
    cdef tuple flat = prog[3]
    cdef int nx = len(x)
    cdef int t = 0, pos = 0, c, k, l
    cdef long long s, v
    cdef long long *X = <long long *> malloc((nx + 1) * sizeof(long long))
    try:
        for k in range(nx):
            X[k] = _md(x[k], m)
        out = []
        for c in counts:
            s = 0
            for k in range(c):
                v = _md(coefs[t], m)
                for l in range(<int> lens[t]):
                    v = v * X[<int> flat[pos]] % m
                    pos += 1
                s = (s + v) % m
                t += 1
            out.append(s)
        return tuple(out)
    finally:
        free(X)


def divisible_all(tuple a, tuple mods):
    cdef int i
    for i in range(min(len(a), len(mods))):
        if a[i] % mods[i] != 0:
            return False
    return True
