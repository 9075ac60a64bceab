#!/usr/bin/env python3
"""Benchmark the compiled step kernels against the numpy fallback.

Runs every fixed-point step kernel on a few problem sizes and reports
microseconds per iteration for each available backend. The compiled loops
win on small instances where numpy call overhead dominates; BLAS catches up
as dN grows.

Usage: python3 benchmarks/bench_kernels.py [--repeats 2000] [--json]
"""

import argparse
import json
import time

import numpy as np

from ridgefp.io import GeneratorSpec, generate_problem
from ridgefp.kernels import backends

SIZES = [(10, 500), (50, 2000), (200, 5000)]
STEPS = ["step_pdfp1", "step_pdfp2", "step_qtz", "step_nqtz", "step_mqtz", "step_mqtz2"]


def time_kernel(mod, name, problem, repeats):
    d, big_n = problem.d, problem.big_n
    w = np.zeros(d)
    alpha = np.zeros(big_n)
    w_out = np.empty(d)
    alpha_out = np.empty(big_n)
    tmp_n = np.empty(big_n)
    tmp_d = np.empty(d)
    ay = problem.a @ problem.y
    fn = getattr(mod, name)
    args = (problem.a, problem.y, ay) if name == "step_pdfp1" else (problem.a, problem.y)
    theta = 0.3

    def run_once():
        fn(*args, problem.lam_n, theta, w, alpha, w_out, alpha_out, tmp_n, tmp_d)

    for _ in range(10):  # warmup
        run_once()
    start = time.perf_counter()
    for _ in range(repeats):
        run_once()
    return (time.perf_counter() - start) / repeats * 1e6  # us/iter


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=2000)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()

    mods = backends()
    results = []
    for d, n in SIZES:
        repeats = max(50, int(args.repeats * 5000 / (d * n)))
        problem = generate_problem(GeneratorSpec(d=d, n=n, m=1, lam=1.0 / n, seed=0))
        for name in STEPS:
            row = {"d": d, "N": n, "kernel": name, "repeats": repeats}
            for backend, mod in sorted(mods.items()):
                row[backend] = round(time_kernel(mod, name, problem, repeats), 3)
            if "pure" in row and "compiled" in row:
                row["speedup"] = round(row["pure"] / row["compiled"], 2)
            results.append(row)

    if args.json:
        print(json.dumps(results, indent=2))
        return

    names = sorted(mods)
    header = f"{'d':>5} {'N':>6} {'kernel':<12}" + "".join(f"{b + ' us':>14}" for b in names)
    if len(names) == 2:
        header += f"{'speedup':>9}"
    print(header)
    print("-" * len(header))
    for row in results:
        line = f"{row['d']:>5} {row['N']:>6} {row['kernel']:<12}"
        line += "".join(f"{row[b]:>14.3f}" for b in names)
        if "speedup" in row:
            line += f"{row['speedup']:>9.2f}"
        print(line)
    if len(names) < 2:
        print("\n(compiled kernels not built; showing the numpy fallback only)")


if __name__ == "__main__":
    main()
