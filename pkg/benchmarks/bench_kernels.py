#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Times the three O(N^2) hot loops (cutoff density, gaussian density, delta)
and nearest-center assignment on random 1-D score sets.

    python benchmarks/bench_kernels.py --sizes 500 1930 4000 --repeats 5
"""

import argparse
import time

import numpy as np

from peakspam import dpc
from peakspam.distances import DistanceMatrix
from peakspam.dpc import _kernels_py

try:
    from peakspam.dpc import _kernels_cy
except ImportError:
    _kernels_cy = None


def best_of(repeats, fn):
    best = None
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        elapsed = time.perf_counter() - started
        best = elapsed if best is None else min(best, elapsed)
    return best


def bench_backend(kernels, dm, d_c, order, centers, repeats):
    n = dm.n
    rho = np.empty(n)
    delta = np.empty(n)
    nearest = np.empty(n, dtype=np.intp)
    assignment = np.empty(n, dtype=np.intp)
    return {
        "rho_cutoff": best_of(repeats, lambda: kernels.rho_cutoff(
            dm.condensed, n, d_c, 0, n, rho)),
        "rho_gaussian": best_of(repeats, lambda: kernels.rho_gaussian(
            dm.condensed, n, d_c, 0, n, rho)),
        "delta": best_of(repeats, lambda: kernels.delta_from_order(
            dm.condensed, n, order, delta, nearest)),
        "assign": best_of(repeats, lambda: kernels.assign_nearest_center(
            dm.condensed, n, centers, 0, n, assignment)),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[500, 1930, 4000])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print(f"active backend: {dpc.BACKEND}")
    if _kernels_cy is None:
        print("compiled kernels not built; benchmarking the NumPy fallback only")

    for n in args.sizes:
        rng = np.random.default_rng(n)
        dm = DistanceMatrix.from_1d(rng.uniform(-3, 3, n))
        d_c = dpc.select_dc(dm, dpc.DensityParams())
        order = dpc.density_order(dpc.local_density(dm, d_c))
        centers = np.sort(rng.choice(n, size=3, replace=False)).astype(np.intp)

        results = {"python": bench_backend(_kernels_py, dm, d_c, order, centers,
                                           args.repeats)}
        if _kernels_cy is not None:
            results["cython"] = bench_backend(_kernels_cy, dm, d_c, order, centers,
                                              args.repeats)

        print(f"\nN={n}  (M={dm.condensed.shape[0]} pairs, best of {args.repeats})")
        header = f"  {'kernel':<14}" + "".join(f"{name:>12}" for name in results)
        if len(results) == 2:
            header += f"{'speedup':>10}"
        print(header)
        for op in ("rho_cutoff", "rho_gaussian", "delta", "assign"):
            line = f"  {op:<14}"
            for name in results:
                line += f"{results[name][op] * 1e3:>10.2f}ms"
            if len(results) == 2:
                line += f"{results['python'][op] / results['cython'][op]:>9.1f}x"
            print(line)


if __name__ == "__main__":
    main()
