"""Kernel selection: the compiled extension when present, pure Python otherwise.

Set ``NORMCOMPAT_PURE=1`` to force the Python path. Calls whose modulus does
not fit the compiled kernels' 64-bit arithmetic are routed to Python.
"""

import os

from . import _pykernels as _py

_C_LIMIT = 1 << 31

try:
    if os.environ.get("NORMCOMPAT_PURE") == "1":
        raise ImportError("pure mode requested")
    from . import _ckernels as _c
except ImportError:
    _c = None

BACKEND = "cython" if _c is not None else "python"


def _pick(m):
    return _c if (_c is not None and m < _C_LIMIT) else _py


def mat_mul(a, b, n, m):
    return _pick(m).mat_mul(a, b, n, m)


def mat_inv(a, n, p, m):
    return _pick(m).mat_inv(a, n, p, m)


def mat_det(a, n, m):
    if _c is not None and m < _C_LIMIT:
        d = _c.mat_det(a, n, m)
        if d >= 0:
            return d
    return _py.mat_det(a, n, m)


def poly_eval(prog, x, m):
    return _pick(m).poly_eval(prog, x, m)


def divisible_all(a, mods):
    if _c is not None and max(mods, default=1) < _C_LIMIT:
        return _c.divisible_all(a, mods)
    return _py.divisible_all(a, mods)


def python_kernels():
    return _py


def compiled_kernels():
    return _c
