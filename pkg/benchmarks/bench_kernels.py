"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from qsphere.kernels import compiled_impl, python_impl
from qsphere.linalg import PRIMES


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(rng):
    p = PRIMES[0]
    for rows, cols in ((120, 100), (300, 250), (600, 500)):
        a = rng.integers(-3, 4, size=(rows, cols)).astype(np.int64)
        a[:, cols // 2:] = 0  # sparse-ish right half, like operator matrices
        a[:, cols // 2:] += a[:, : cols - cols // 2] * 2
        yield f"rref_mod_p {rows}x{cols}", "rref_mod_p", (a % p, p)
    for count in (10**5, 10**6):
        y1 = rng.standard_normal((count, 4)) * 0.3
        y1[:, 0] += 1.0
        yield f"weighted_ball_sums {count:.0e} rows", "weighted_ball_sums", (y1, 0.25 ** 2, 1.0)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if compiled_impl is None:
        print("compiled extension not built; only the python backend is available")
    rng = np.random.default_rng(0)
    print(f"{'case':40s} {'python [s]':>12s} {'cython [s]':>12s} {'speedup':>8s}  agree")
    for label, fn_name, fargs in cases(rng):
        tp, rp = best_of(lambda: getattr(python_impl, fn_name)(*fargs), args.repeat)
        if compiled_impl is None:
            print(f"{label:40s} {tp:12.4f} {'-':>12s} {'-':>8s}  -")
            continue
        tc, rc = best_of(lambda: getattr(compiled_impl, fn_name)(*fargs), args.repeat)
        if fn_name == "rref_mod_p":
            agree = np.array_equal(rp[0], rc[0]) and np.array_equal(rp[1], rc[1])
        else:
            agree = rp[0] == rc[0] and np.allclose(rp[1:], rc[1:], rtol=1e-12)
        print(f"{label:40s} {tp:12.4f} {tc:12.4f} {tp / tc:8.1f}  {agree}")


if __name__ == "__main__":
    main()
