"""Compare the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--sizes 2 4 6] [--end-to-end]

Each kernel is run on the same random inputs through both backends; results
are checked for agreement before timing. ``--end-to-end`` additionally times
one orbit-class enumeration in a subprocess per backend.
"""

import argparse
import os
import random
import subprocess
import sys
import time
import timeit

from normcompat import kernels
from normcompat.groups.poly import compile_program, matrix_vars, sym_det, sym_matmul


def _unit_matrix(rng, n, p, m):
    while True:
        a = tuple(rng.randrange(m) for _ in range(n * n))
        if kernels.python_kernels().mat_det(a, n, p) % p:
            return a


def cases(n, p, m, rng, count=50):
    mats = [_unit_matrix(rng, n, p, m) for _ in range(count)]
    x = matrix_vars(n)
    polys = [sym_det(x)] + [e for row in sym_matmul(x, x) for e in row]
    prog = compile_program(polys)
    return {
        "mat_mul": [(a, b, n, m) for a, b in zip(mats, mats[1:])],
        "mat_inv": [(a, n, p, m) for a in mats],
        "mat_det": [(a, n, m) for a in mats],
        "poly_eval": [(prog, a, m) for a in mats],
    }


def bench(repeat, sizes, p=3, prec=6):
    py, c = kernels.python_kernels(), kernels.compiled_kernels()
    if c is None:
        print("compiled kernels not built; only the Python backend is available")
    m = p ** prec
    rng = random.Random(0)
    print(f"{'kernel':<10} {'n':>2} {'python us':>10} {'cython us':>10} {'speedup':>8}")
    for n in sizes:
        for name, args in cases(n, p, m, rng).items():
            fp = getattr(py, name)
            if c is not None:
                fc = getattr(c, name)
                for a in args:
                    if fp(*a) != fc(*a):
                        raise SystemExit(f"backends disagree on {name} at n={n}")

            def run(f):
                return min(timeit.repeat(lambda: [f(*a) for a in args], number=1,
                                         repeat=repeat)) / len(args) * 1e6

            tp = run(fp)
            if c is None:
                print(f"{name:<10} {n:>2} {tp:>10.1f} {'-':>10} {'-':>8}")
            else:
                tc = run(fc)
                print(f"{name:<10} {n:>2} {tp:>10.1f} {tc:>10.1f} {tp / tc:>7.1f}x")


_E2E = ("from normcompat.catalogue import load_fixture;"
        "from normcompat.mackey.machine import orbit_class;"
        "run = load_fixture('gsp4-gl2');"
        "assert len(orbit_class(run.pair, 1, method='enumerate').terms) == 96")


def end_to_end():
    for label, pure in (("python", "1"), ("cython", "0")):
        env = dict(os.environ, NORMCOMPAT_PURE=pure)
        t = time.perf_counter()
        subprocess.run([sys.executable, "-c", _E2E], check=True, env=env)
        print(f"gsp4-gl2 orbit class by enumeration, {label}: {time.perf_counter() - t:.2f} s")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 6])
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args(argv)
    print(f"active backend: {kernels.BACKEND}")
    bench(args.repeat, args.sizes)
    if args.end_to_end:
        end_to_end()


if __name__ == "__main__":
    main()
