"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

The first numba call of each kernel includes compilation and is reported
separately.
"""
import argparse
import time

import numpy as np

from wanderlab import kernels
from wanderlab._accel import HAS_NUMBA


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases():
    rng = np.random.default_rng(0)
    vals = rng.standard_normal(1 << 19) + 1j * rng.standard_normal(1 << 19)
    grid = rng.standard_normal((1024, 1024)) + 1j * rng.standard_normal((1024, 1024))
    pts = rng.uniform(-7, 7, 1 << 19) + 1j * rng.uniform(-7, 7, 1 << 19)
    esc = (-4.0, 4.0, -4.0, 4.0, 256, 256, -0.5 + 0j, 100, 50.0)
    return [
        ("pairwise_sum 2^19", kernels.pairwise_sum_numpy, kernels.pairwise_sum_jit, (vals,)),
        ("bilinear 2^19 pts", kernels.bilinear_numpy, kernels.bilinear_jit,
         (grid, -8.0, -8.0, 16 / 1024, 16 / 1024, pts)),
        ("escape_counts 256^2", kernels.escape_counts_numpy, kernels.escape_counts_jit, esc),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not HAS_NUMBA:
        print("numba unavailable or disabled; only the numpy column is meaningful")
    print(f"{'kernel':<22}{'numpy [s]':>12}{'numba [s]':>12}{'compile [s]':>13}{'speedup':>9}  same")
    for name, np_fn, jit_fn, args_ in cases():
        t_np, r_np = best_of(lambda: np_fn(*args_), args.repeat)
        t0 = time.perf_counter()
        jit_fn(*args_)
        t_compile = time.perf_counter() - t0
        t_jit, r_jit = best_of(lambda: jit_fn(*args_), args.repeat)
        same = np.array_equal(np.asarray(r_np), np.asarray(r_jit))
        print(f"{name:<22}{t_np:>12.4f}{t_jit:>12.4f}{t_compile:>13.3f}{t_np / t_jit:>9.1f}  {same}")


if __name__ == "__main__":
    main()
