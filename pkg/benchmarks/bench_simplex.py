#!/usr/bin/env python3
"""Benchmark the simplex kernel: numba-compiled vs pure NumPy.

Builds representative best-response LPs (few rows, thousands of box-bounded
columns) and times full equilibrium solves through each kernel path. The
pure path is the same function without @njit, selectable at import time via
HONEYFLOW_PURE_NUMPY=1; here both are exercised in one process.

Usage: python benchmarks/bench_simplex.py [--sizes 50,200,1000] [--repeat 5]
                                          [--csv out.csv]
"""

import argparse
import csv
import statistics
import sys
import time

from honeyflow import _kernels
from honeyflow.equilibrium import solve_stackelberg
from honeyflow.experiments import GeneratorParams, random_game


def _paths():
    pure = _kernels.simplex_iterate_python
    if _kernels.USING_NUMBA:
        return (("numba", _kernels.simplex_iterate), ("numpy", pure))
    try:
        from numba import njit

        return (("numba", njit(cache=True)(pure)), ("numpy", pure))
    except ImportError:
        print("numba unavailable; benchmarking the pure path only", file=sys.stderr)
        return (("numpy", pure),)


def _time_solves(spec, repeat: int) -> list[float]:
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        solve_stackelberg(spec)
        times.append(time.perf_counter() - start)
    return times


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="50,200,1000",
                        help="honey-flow bounds to benchmark (5 types each)")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--csv", default=None)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    rows = []
    original = _kernels.simplex_iterate
    try:
        for label, fn in _paths():
            _kernels.simplex_iterate = fn
            # warm-up: triggers JIT compilation on the numba path
            solve_stackelberg(
                random_game(
                    GeneratorParams(type_count=2, real_flows=5, honey_bound_range=(3, 3)),
                    0,
                )
            )
            for size in sizes:
                spec = random_game(
                    GeneratorParams(
                        type_count=5, real_flows=500, honey_bound_range=(size, size)
                    ),
                    seed=1,
                )
                times = _time_solves(spec, args.repeat)
                rows.append(
                    {
                        "kernel": label,
                        "honey_bound": size,
                        "median_s": statistics.median(times),
                        "min_s": min(times),
                        "max_s": max(times),
                    }
                )
    finally:
        _kernels.simplex_iterate = original

    print(f"{'kernel':<8}{'honey_bound':>12}{'median':>12}{'min':>12}{'max':>12}")
    for r in rows:
        print(
            f"{r['kernel']:<8}{r['honey_bound']:>12}"
            f"{r['median_s']*1e3:>10.2f}ms{r['min_s']*1e3:>10.2f}ms{r['max_s']*1e3:>10.2f}ms"
        )
    by_size = {}
    for r in rows:
        by_size.setdefault(r["honey_bound"], {})[r["kernel"]] = r["median_s"]
    for size, kernels in sorted(by_size.items()):
        if {"numba", "numpy"} <= set(kernels):
            print(
                f"speedup at H={size}: {kernels['numpy'] / kernels['numba']:.2f}x "
                "(numpy median / numba median)"
            )

    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(
                fh, fieldnames=["kernel", "honey_bound", "median_s", "min_s", "max_s"]
            )
            writer.writeheader()
            writer.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
