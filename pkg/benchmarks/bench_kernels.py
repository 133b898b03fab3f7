#!/usr/bin/env python3
"""Compare the numba and pure-numpy simulator kernels.

Usage:
    python benchmarks/bench_kernels.py [--rows 1000000] [--repeat 5]

Times each kernel on identical uniform blocks (after one warm-up call so
JIT compilation is excluded) and checks the two backends agree.
"""

import argparse
import time

import numpy as np

from credit_engine import _kernels


def best_of(fn, repeat, *args):
    fn(*args)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, nargs="+", default=[2, 4, 8, 12, 32])
    args = ap.parse_args()

    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    print(f"rows={args.rows} repeat={args.repeat} active backend={_kernels.BACKEND}")
    print(f"{'kernel':<10} {'n':>3} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    rng = np.random.default_rng(0)
    for n in args.n:
        x = rng.random((args.rows, n))
        for name, f_np, f_nb, extra in (
            ("simplex", _kernels.simplex_block_numpy, _kernels.simplex_block_numba, ()),
            ("rejection", _kernels.rejection_block_numpy, _kernels.rejection_block_numba, (float(n - 1),)),
        ):
            t_np = best_of(f_np, args.repeat, x, *extra)
            t_nb = best_of(f_nb, args.repeat, x, *extra)
            a, b = f_np(x, *extra)[0], f_nb(x, *extra)[0]
            assert len(a) == len(b) and np.allclose(a, b, rtol=1e-12)
            print(f"{name:<10} {n:>3} {t_np * 1e3:>10.1f} {t_nb * 1e3:>10.1f} {t_np / t_nb:>7.2f}x")


if __name__ == "__main__":
    main()
