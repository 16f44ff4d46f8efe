#!/usr/bin/env python3
"""Benchmark the compiled reduction core against the pure-Python engine.

Runs the same workloads in two subprocesses (FUNRIPS_BACKEND=native / py),
because the backend is chosen at import time.  Workloads exercise the hot
kernels: the graded kernel sweep, the boundary lift, and presentation
minimization, at two-circles scale.

Usage: python3 benchmarks/bench_backends.py [--sizes 100,200] [--seeds 2]
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKER = """
import json, sys, time
import numpy as np
import funrips
from funrips import build_function_rips, smoothed_presentation, slice_vertical
from funrips.harness.experiments import two_circle_space

sizes = json.loads(sys.argv[1])
seeds = int(sys.argv[2])
rows = []
for k in sizes:
    for seed in range(seeds):
        space = two_circle_space((1.0, 0.6), k, seed)
        cap = min(space.meta["rho"]) * (1 + 1e-9)
        t0 = time.perf_counter()
        c = build_function_rips(space, 2, max_scale=cap)
        t1 = time.perf_counter()
        est = smoothed_presentation(c, 1)
        t2 = time.perf_counter()
        n_tri = c.n_simplices(2)
        for d in np.linspace(0.2, 0.45, 8):
            slice_vertical(est, float(d))
        t3 = time.perf_counter()
        rows.append({"k": k, "seed": seed, "triangles": n_tri,
                     "build_s": t1 - t0, "present_s": t2 - t1,
                     "slice_s": t3 - t2})
print(json.dumps({"backend": funrips.active_backend(), "rows": rows}))
"""


def run_backend(backend, sizes, seeds):
    env = dict(os.environ, FUNRIPS_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", WORKER, json.dumps(sizes), str(seeds)],
        capture_output=True, text=True, env=env, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="100,200")
    ap.add_argument("--seeds", type=int, default=2)
    args = ap.parse_args()
    sizes = [int(x) for x in args.sizes.split(",")]

    results = {}
    for backend in ("py", "native"):
        try:
            results[backend] = run_backend(backend, sizes, args.seeds)
        except subprocess.CalledProcessError as exc:
            print(f"{backend}: failed ({exc.stderr.strip().splitlines()[-1]})")
    if "native" not in results:
        print("compiled core unavailable; only the pure-Python engine ran")

    print(f"{'k':>6} {'tri':>8} | {'build':>18} {'present':>18} {'slice':>18}")
    for k in sizes:
        line = {"k": k}
        for backend, res in results.items():
            rows = [r for r in res["rows"] if r["k"] == k]
            for key in ("build_s", "present_s", "slice_s"):
                line.setdefault(key, {})[backend] = \
                    sum(r[key] for r in rows) / len(rows)
            line["tri"] = rows[0]["triangles"]

        def fmt(key):
            py = line[key].get("py")
            nat = line[key].get("native")
            if py is None or nat is None:
                only = py if py is not None else nat
                return f"{only:9.3f}s        "
            return f"{py:7.2f}s/{nat:6.2f}s x{py / nat:4.1f}"

        print(f"{k:>6} {line['tri']:>8} | {fmt('build_s')} {fmt('present_s')} "
              f"{fmt('slice_s')}")
    print("columns: pure-python / native, speedup factor")


if __name__ == "__main__":
    main()
