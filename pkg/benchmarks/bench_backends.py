"""Benchmark the compiled tridiagonal kernel against the pure-Python twin.

Usage:
    python benchmarks/bench_backends.py [--sizes 100,200,400,800] [--repeats 3]

Both kernels run the same implicit-shift QL algorithm on identical inputs;
the table reports wall time per solve (eigenvalues + weights) and the
speedup, plus the maximum disagreement as a sanity check.
"""

import argparse
import time

import numpy as np


def time_kernel(fn, d, e, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn(d, e, True, 50)
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="100,200,400,800")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    from jacobispec import _tridiag_py

    try:
        from jacobispec import _tridiag
    except ImportError:
        print("compiled kernel not built; run pip install -e . first")
        return 1

    rng = np.random.default_rng(0)
    print(f"{'n':>6} {'cython (s)':>12} {'python (s)':>12} {'speedup':>9} "
          f"{'max |dw|':>10}")
    for n in sizes:
        d = rng.normal(size=n)
        e = rng.uniform(0.1, 1.0, size=n - 1)
        t_c, (w_c, _) = time_kernel(_tridiag.tridiag_eigen, d, e, args.repeats)
        t_p, (w_p, _) = time_kernel(_tridiag_py.tridiag_eigen, d, e, args.repeats)
        dw = np.max(np.abs(w_c - w_p))
        print(f"{n:>6} {t_c:>12.4f} {t_p:>12.4f} {t_p / t_c:>9.1f} {dw:>10.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
