#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Run without arguments to compare both paths (spawns itself once per path
with JSRKIT_NO_NUMBA set accordingly); run with --single to time only the
path selected by the current environment.
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def time_call(fn, *args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def run_single():
    from jsrkit import _kernels

    rng = np.random.default_rng(0)
    results = {"path": "numba" if _kernels.USE_NUMBA else "numpy"}

    mats2 = np.ascontiguousarray(
        0.7 * rng.standard_normal((2, 2, 2)).astype(np.complex128))
    mats3 = np.ascontiguousarray(
        0.6 * rng.standard_normal((3, 4, 4)).astype(np.complex128))
    paths = rng.integers(0, 2, size=(200, 2000))
    single = np.ascontiguousarray(
        np.array([[1.0, 1.0], [0.0, 0.9]], dtype=np.complex128))

    # warm-up (JIT compilation must not count)
    _kernels.scan_words(mats2, 2, 10**6, True)
    _kernels.path_log_norms(mats2, paths[:2, :64])
    _kernels.power_log_norms(single, 4)

    results["scan_words K=2 d=2 depth=14"] = time_call(
        _kernels.scan_words, mats2, 14, 10**7, True)
    results["scan_words K=3 d=4 depth=8"] = time_call(
        _kernels.scan_words, mats3, 8, 10**7, True)
    results["path_log_norms 200x2000"] = time_call(
        _kernels.path_log_norms, mats2, paths)
    results["power_log_norms n=5000"] = time_call(
        _kernels.power_log_norms, single, 5000)
    return results


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--single", action="store_true",
                    help="time only the currently selected kernel path")
    args = ap.parse_args()

    if args.single:
        print(json.dumps(run_single()))
        return

    rows = []
    for flag in ("0", "1"):
        env = dict(os.environ, JSRKIT_NO_NUMBA=flag)
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--single"],
            env=env, capture_output=True, text=True, check=True)
        rows.append(json.loads(out.stdout.strip().splitlines()[-1]))

    keys = [k for k in rows[0] if k != "path"]
    width = max(len(k) for k in keys)
    print(f"{'kernel':<{width}}  {rows[0]['path']:>10}  {rows[1]['path']:>10}  speedup")
    for k in keys:
        a, b = rows[0][k], rows[1][k]
        print(f"{k:<{width}}  {a:>9.4f}s  {b:>9.4f}s  {b / a:>6.1f}x")


if __name__ == "__main__":
    main()
