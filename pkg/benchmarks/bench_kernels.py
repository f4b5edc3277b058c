#!/usr/bin/env python3
"""Benchmark the numba JIT kernel against the pure-numpy fallback.

The backend is chosen at import time via SEPIDX_NO_NUMBA, so each backend
runs in its own subprocess.  Usage:

    python3 benchmarks/bench_kernels.py [--sizes 2000x64,5000x128] [--threads N]
"""
import argparse
import json
import os
import subprocess
import sys
import time


def run_one(q, d, backend, threads):
    code = f"""
import time, numpy as np
from sepidx.core import LabeledFeatureSet
from sepidx import engine
engine.set_threads({threads})
rng = np.random.default_rng(0)
centers = rng.standard_normal((20, {d})) * 3.0
asg = rng.integers(0, 20, {q})
pts = (centers[asg] + rng.standard_normal(({q}, {d})) * 0.5).astype(np.float32)
fs = LabeledFeatureSet(points=pts, labels=(asg % 5).astype(np.uint32))
engine.separation_index(LabeledFeatureSet(
    points=pts[:64], labels=fs.labels[:64]))  # warm the JIT
t0 = time.perf_counter()
score = engine.separation_index(fs)
print(time.perf_counter() - t0, score.si_value)
"""
    env = dict(os.environ)
    if backend == "numpy":
        env["SEPIDX_NO_NUMBA"] = "1"
    else:
        env.pop("SEPIDX_NO_NUMBA", None)
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, env=env, check=True)
    elapsed, si = out.stdout.split()
    return float(elapsed), float(si)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="1000x64,4000x128,8000x256")
    parser.add_argument("--threads", type=int, default=max(1, os.cpu_count() or 1))
    args = parser.parse_args()

    results = []
    for spec in args.sizes.split(","):
        q, d = (int(v) for v in spec.split("x"))
        row = {"q": q, "d": d}
        for backend in ("numba", "numpy"):
            elapsed, si = run_one(q, d, backend, args.threads)
            row[backend + "_s"] = round(elapsed, 3)
            row.setdefault("si", si)
        row["speedup"] = round(row["numpy_s"] / row["numba_s"], 2)
        results.append(row)
        print(f"Q={q:6d} D={d:4d}  numba {row['numba_s']:8.3f}s  "
              f"numpy {row['numpy_s']:8.3f}s  speedup {row['speedup']:.2f}x")
    print(json.dumps(results))


if __name__ == "__main__":
    main()
