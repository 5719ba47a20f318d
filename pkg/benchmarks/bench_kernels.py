#!/usr/bin/env python3
"""Timing comparison between the compiled and pure-numpy kernel backends.

The three hot kernels are timed on representative workloads: the
log-likelihood surface from the fit's grid stage, the simplex refinement
stage, and the fixed-step master-equation integrator on the single-ion
leakage generator.  The first compiled call is excluded (JIT warm-up).

    python3 benchmarks/bench_kernels.py --repeat 5
"""

import argparse
import time

import numpy as np

from dfsmem import backend
from dfsmem import master_eq as me
from dfsmem import _kernels_numpy as knp

try:
    from dfsmem import _kernels_numba as knb
except ImportError:
    knb = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(
        description="benchmark the numba kernels against the numpy fallback")
    ap.add_argument("--repeat", type=int, default=5,
                    help="repetitions per kernel; the best time is reported")
    args = ap.parse_args()

    gen = np.random.default_rng(7)
    t = np.sort(gen.uniform(0.0, 1.0, 12))
    R = np.full(12, 200.0)
    S = np.rint(R * 0.5 * (1.0 + 0.9 * np.exp(-t / 0.35)))
    a_grid = np.linspace(0.0, 1.0, 41)
    x_grid = np.linspace(np.log(1e-2), np.log(1e2), 61)

    ops = me.build_jump_operators(me.NoiseParams(1e-4, 5e-4), 1)
    space = me.single_ion_space()
    sup = me._generator(ops, space)
    y0 = me.DensityMatrix.basis(space, 3).mat.reshape(-1)
    sup_data = sup.data.astype(np.complex128)

    cases = [
        ("loglik_grid (41 x 61, 12 records)",
         lambda k: k.loglik_grid(0, t, R, S, a_grid, x_grid)),
        ("refine_simplex (tol 1e-4)",
         lambda k: k.refine_simplex(0, t, R, S, 0.5, 0.0,
                                    x_grid[0], x_grid[-1],
                                    0.025, 0.15, 1e-4, 1e-4, 500)),
        ("csr_rk4 (256^2 superop, 20k steps)",
         lambda k: k.csr_rk4(sup.indptr, sup.indices, sup_data, y0,
                             100.0, 20_000, space.dim, 1e-6)),
    ]

    print(f"default backend: {backend.backend_name()}; "
          f"repeat = {args.repeat} (best shown)")
    header = f"{'kernel':<38} {'numpy':>11} {'numba':>11} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, call in cases:
        t_np = best_of(lambda: call(knp), args.repeat)
        if knb is None:
            print(f"{name:<38} {t_np * 1e3:9.2f} ms {'n/a':>11} {'n/a':>9}")
            continue
        call(knb)
        t_nb = best_of(lambda: call(knb), args.repeat)
        print(f"{name:<38} {t_np * 1e3:9.2f} ms {t_nb * 1e3:9.2f} ms "
              f"{t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
