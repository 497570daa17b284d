#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Usage:
    python benchmarks/bench_kernels.py [--calls N] [--csv out.csv]

Times the three kernels on workloads shaped like the Monte Carlo
calibration suites (many small regressions, sequential recursive
residuals, ADF with AIC lag search) and prints per-call times for both
backends plus the speedup.
"""

import argparse
import csv
import sys
import time

import numpy as np

from powsec._kernels import _fallback

try:
    from powsec._kernels import _core
except ImportError:
    _core = None


def time_call(fn, args, calls):
    fn(*args)  # warm up
    start = time.perf_counter()
    for _ in range(calls):
        fn(*args)
    return (time.perf_counter() - start) / calls


def workloads(calls):
    rng = np.random.default_rng(12345)
    X = rng.standard_normal((500, 8))
    X[:, 0] = 1.0
    y = X @ rng.standard_normal(8) + rng.standard_normal(500)
    Xr = rng.standard_normal((1000, 8))
    Xr[:, 0] = 1.0
    yr = Xr @ rng.standard_normal(8) + rng.standard_normal(1000)
    walk = np.cumsum(rng.standard_normal(500))
    return [
        ("lstsq_stats 500x8", "lstsq_stats", (X, y), calls),
        ("recursive_residuals 1000x8", "recursive_residuals", (Xr, yr), max(calls // 4, 1)),
        ("adf_stat T=500 autolag(17)", "adf_stat", (walk, 1, 17, True), max(calls // 4, 1)),
    ]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--calls", type=int, default=400, help="calls per timing loop")
    parser.add_argument("--csv", help="also write results to this CSV file")
    args = parser.parse_args(argv)

    if _core is None:
        print("compiled extension not built; showing fallback only", file=sys.stderr)

    rows = []
    for label, name, call_args, calls in workloads(args.calls):
        fallback_t = time_call(getattr(_fallback, name), call_args, calls)
        if _core is not None:
            compiled_t = time_call(getattr(_core, name), call_args, calls)
            rows.append((label, calls, fallback_t * 1e6, compiled_t * 1e6, fallback_t / compiled_t))
        else:
            rows.append((label, calls, fallback_t * 1e6, float("nan"), float("nan")))

    header = f"{'workload':<30} {'calls':>6} {'fallback us':>12} {'compiled us':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, calls, fb, co, speedup in rows:
        print(f"{label:<30} {calls:>6} {fb:>12.1f} {co:>12.1f} {speedup:>8.2f}")

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["workload", "calls", "fallback_us", "compiled_us", "speedup"])
            writer.writerows(rows)
        print(f"wrote {args.csv}")


if __name__ == "__main__":
    main()
