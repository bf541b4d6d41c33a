#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-NumPy fallback.

The three kernels are the hot loops of everything downstream: the Levinson
sweep behind the Toeplitz route, the Szego point evaluation behind the
polynomial route, and the inverse (moments-from-reflection) step behind the
direct problem.  Run:

    python benchmarks/bench_kernels.py [--orders 64,256,1024,4096] [--repeats 5]
"""

import argparse
import time

import numpy as np

from canonham import _kernels_py

try:
    from canonham import _kernels

    BACKENDS = [("cython", _kernels), ("python", _kernels_py)]
except ImportError:
    print("compiled extension not available; timing the python backend only")
    BACKENDS = [("python", _kernels_py)]


def make_moments(order, seed=7):
    rng = np.random.default_rng(seed)
    mags = 0.6 * rng.uniform(0.05, 1.0, order) / (1.0 + 0.05 * np.arange(order))
    alpha = mags * np.exp(1j * rng.uniform(0, 2 * np.pi, order))
    return _kernels_py.moments_from_alphas(1.0, alpha, order), alpha


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--orders", default="64,256,1024,4096")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    orders = [int(v) for v in args.orders.split(",")]

    header = f"{'kernel':<22}{'order':>7}" + "".join(
        f"{name:>14}" for name, _ in BACKENDS
    )
    if len(BACKENDS) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))

    for order in orders:
        gamma, alpha = make_moments(order)
        rows = {
            "levinson_sweep": lambda impl: impl.levinson_sweep(
                gamma, order, 1e-13, False
            ),
            "szego_eval": lambda impl: impl.szego_eval(1.0, alpha, 1.0 + 0j, order),
            "moments_from_alphas": lambda impl: impl.moments_from_alphas(
                1.0, alpha, order
            ),
        }
        for label, call in rows.items():
            times = [
                best_of(lambda: call(impl), args.repeats) for _, impl in BACKENDS
            ]
            line = f"{label:<22}{order:>7}" + "".join(
                f"{t * 1e3:>12.3f}ms" for t in times
            )
            if len(times) == 2:
                line += f"{times[1] / times[0]:>9.1f}x"
            print(line)

    # correctness tie: identical outputs across backends on the same input
    if len(BACKENDS) == 2:
        a_c = BACKENDS[0][1].levinson_sweep(gamma, orders[-1], 1e-13, False)
        a_p = BACKENDS[1][1].levinson_sweep(gamma, orders[-1], 1e-13, False)
        dev = float(np.max(np.abs(a_c[2] - a_p[2])))
        print(f"\nmax |sum| deviation between backends at order {orders[-1]}: {dev:.3e}")


if __name__ == "__main__":
    main()
