import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normcompat import kernels
from normcompat.groups.poly import compile_program, matrix_vars, sym_det, sym_matmul

py = kernels.python_kernels()
c = kernels.compiled_kernels()
needs_c = pytest.mark.skipif(c is None, reason="compiled kernels not built")


def square(n, m):
    return st.tuples(*[st.integers(0, m - 1)] * (n * n))


def det_oracle(a, n):
    if n == 1:
        return a[0]
    total = 0
    for j in range(n):
        minor = tuple(a[i * n + k] for i in range(1, n) for k in range(n) if k != j)
        total += (-1) ** j * a[j] * det_oracle(minor, n - 1)
    return total


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 4), data=st.data(), p=st.sampled_from([2, 3, 5]), k=st.integers(1, 4))
def test_python_kernels_against_oracles(n, data, p, k):
    m = p ** k
    a = data.draw(square(n, m))
    b = data.draw(square(n, m))
    prod = py.mat_mul(a, b, n, m)
    want = tuple(sum(a[i * n + t] * b[t * n + j] for t in range(n)) % m
                 for i in range(n) for j in range(n))
    assert prod == want
    assert py.mat_det(a, n, m) == det_oracle(a, n) % m
    if det_oracle(a, n) % p:
        inv = py.mat_inv(a, n, p, m)
        assert py.mat_mul(a, inv, n, m) == tuple(int(i % (n + 1) == 0) for i in range(n * n))


@needs_c
@settings(max_examples=80, deadline=None)
@given(n=st.integers(1, 5), data=st.data(), p=st.sampled_from([2, 3, 5, 7]), k=st.integers(1, 6))
def test_backends_agree(n, data, p, k):
    m = p ** k
    a = data.draw(square(n, m))
    b = data.draw(square(n, m))
    assert c.mat_mul(a, b, n, m) == py.mat_mul(a, b, n, m)
    assert kernels.mat_det(a, n, m) == py.mat_det(a, n, m)
    if py.mat_det(a, n, m) % p:
        assert c.mat_inv(a, n, p, m) == py.mat_inv(a, n, p, m)
    for mods in ((p,) * len(a), (m,) * len(a), (p, m)):
        assert c.divisible_all(a, mods) == py.divisible_all(a, mods)


@needs_c
def test_poly_eval_agrees():
    x = matrix_vars(3)
    prog = compile_program([sym_det(x)] + [e for row in sym_matmul(x, x) for e in row])
    pt = tuple(range(2, 11))
    assert c.poly_eval(prog, pt, 3 ** 5) == py.poly_eval(prog, pt, 3 ** 5)


@needs_c
def test_compiled_kernels_reject_bad_sizes():
    with pytest.raises(ValueError):
        c.mat_mul((1, 2, 3), (1, 2, 3, 4), 2, 7)
    with pytest.raises(ValueError):
        c.mat_det((1,), 2, 7)
    with pytest.raises(ValueError):
        c.mat_inv((1, 0, 0), 2, 7, 7)


def test_large_modulus_routes_to_python():
    m = 3 ** 40
    a = (m - 1, 2, 5, m - 7)
    assert kernels.mat_mul(a, a, 2, m) == py.mat_mul(a, a, 2, m)


def test_pure_mode_env():
    env = dict(os.environ, NORMCOMPAT_PURE="1")
    out = subprocess.run([sys.executable, "-c",
                          "from normcompat import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
