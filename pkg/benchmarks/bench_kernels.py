#!/usr/bin/env python3
"""Timing comparison of the compiled and pure-Python kernel backends.

Runs the two hot paths (dense profile grids and RK4 trajectory
integration) through both kernel modules on identical inputs and
reports medians plus speedup. Usage:

    python benchmarks/bench_kernels.py [--repeats N] [--grid N]
"""
import argparse
import statistics
import time

import numpy as np

import kgflow._kernels_py as kernels_py
from kgflow import BarrierSpec, free_superposition, match_boundaries

try:
    import kgflow._kernels as kernels_c
except ImportError:
    kernels_c = None


def timeit(fn, repeats):
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=7)
    ap.add_argument("--grid", type=int, default=20000,
                    help="profile grid size")
    args = ap.parse_args()

    klein = match_boundaries(BarrierSpec.from_momentum(
        0.95, V=4.47, a=12.0, kind="electrostatic"))
    strong = free_superposition(0.95, 0.99)
    xs = np.linspace(-20.0, 20.0, args.grid)

    cases = [
        ("profile_grid, klein barrier",
         lambda k: k.profile_grid(klein.params, xs)),
        ("profile_grid, strong reflection",
         lambda k: k.profile_grid(strong.params, xs)),
        ("rk4 eigen, 4000 steps",
         lambda k: k.rk4_trajectory(strong.params, k.LAW_EIGEN,
                                    -0.5, 0.0, 4.0, 0.001)),
        ("rk4 debroglie w/ halving",
         lambda k: k.rk4_trajectory(strong.params, k.LAW_DEBROGLIE,
                                    1.4, 0.0, 4.0, 0.005)),
    ]

    backends = [("python", kernels_py)]
    if kernels_c is not None:
        backends.insert(0, ("cython", kernels_c))
    else:
        print("compiled backend unavailable; timing pure Python only")

    width = max(len(name) for name, _ in cases)
    print(f"{'case':<{width}}  " +
          "".join(f"{n:>12}" for n, _ in backends) +
          ("{:>10}".format("speedup") if kernels_c is not None else ""))
    for name, call in cases:
        times = [timeit(lambda m=mod: call(m), args.repeats)
                 for _, mod in backends]
        row = f"{name:<{width}}  " + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if kernels_c is not None:
            row += f"{times[-1] / times[0]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
