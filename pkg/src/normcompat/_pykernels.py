"""Pure-Python versions of the modular matrix kernels.

Matrices are flat row-major tuples of non-negative ints of length n*n.
Polynomial programs are produced by :func:`normcompat.groups.poly.compile_program`.
"""


def mat_mul(a, b, n, m):
    out = [0] * (n * n)
    for i in range(n):
        row = i * n
        for k in range(n):
            aik = a[row + k]
            if aik:
                kr = k * n
                for j in range(n):
                    out[row + j] += aik * b[kr + j]
    return tuple(x % m for x in out)


def mat_inv(a, n, p, m):
    """Inverse mod m = p^N by Gauss-Jordan with unit pivots, or None."""
    w = [[a[i * n + j] % m for j in range(n)] + [1 if i == j else 0 for j in range(n)]
         for i in range(n)]
    for c in range(n):
        piv = -1
        for r in range(c, n):
            if w[r][c] % p:
                piv = r
                break
        if piv < 0:
            return None
        w[c], w[piv] = w[piv], w[c]
        inv = pow(w[c][c], -1, m)
        rowc = [x * inv % m for x in w[c]]
        w[c] = rowc
        for r in range(n):
            if r != c:
                f = w[r][c]
                if f:
                    rr = w[r]
                    w[r] = [(x - f * y) % m for x, y in zip(rr, rowc)]
    return tuple(w[i][n + j] for i in range(n) for j in range(n))


def mat_det(a, n, m):
    """Determinant mod m via fraction-free (Bareiss) elimination over Z."""
    w = [[a[i * n + j] for j in range(n)] for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if w[k][k] == 0:
            for r in range(k + 1, n):
                if w[r][k] != 0:
                    w[k], w[r] = w[r], w[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                w[i][j] = (w[i][j] * w[k][k] - w[i][k] * w[k][j]) // prev
        prev = w[k][k]
    return (sign * w[n - 1][n - 1]) % m if n else 1 % m


def poly_eval(prog, x, m):
    counts, coefs, lens, flat = prog
    out = []
    t = 0
    pos = 0
    for c in counts:
        s = 0
        for _ in range(c):
            v = coefs[t]
            for _ in range(lens[t]):
                v = v * x[flat[pos]] % m
                pos += 1
            s += v
            t += 1
        out.append(s % m)
    return tuple(out)


def divisible_all(a, mods):
    for x, q in zip(a, mods):
        if x % q:
            return False
    return True
