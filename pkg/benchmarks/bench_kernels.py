"""Compare the compiled kernels against the pure-Python fallback.

Run as ``python3 benchmarks/bench_kernels.py [--steps N] [--repeats R]``.
Reports best-of-R wall times and the speedup factor per kernel.
"""

import argparse
import math
import time

import numpy as np

from stepfreeze._kernels import _fallback

try:
    from stepfreeze._kernels import _native
except ImportError:
    _native = None


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=200_000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if _native is None:
        print("compiled backend not available; nothing to compare")
        return

    rng = np.random.default_rng(0)
    dt = 1e-3
    dw = rng.standard_normal((args.steps, 2)) * math.sqrt(dt)
    tpo = 2 * math.pi * 0.88

    rows = rng.dirichlet(np.ones(64), size=64)
    cum = np.cumsum(rows, axis=1)
    u = rng.random(args.steps)

    cases = [
        ("em_cartesian",
         lambda m: m.em_cartesian(1.0, 0.0, -0.85, tpo, 0.05, dt, dw)),
        ("em_polar",
         lambda m: m.em_polar(1.0, 0.0, -0.85, tpo, 0.05, dt, dw, 1e-6)),
        ("em_cartesian_escape",
         lambda m: m.em_cartesian_escape(1.0, 0.0, -0.85, tpo, 0.05, dt,
                                         dw, 0.01)),
        ("surrogate_walk", lambda m: m.surrogate_walk(cum, 0, u)),
    ]

    print(f"{args.steps} steps, best of {args.repeats}")
    print(f"{'kernel':<22}{'native':>12}{'fallback':>12}{'speedup':>10}")
    for name, call in cases:
        t_native = best_of(lambda: call(_native), args.repeats)
        t_fallback = best_of(lambda: call(_fallback), args.repeats)
        print(f"{name:<22}{t_native:>11.4f}s{t_fallback:>11.4f}s"
              f"{t_fallback / t_native:>9.1f}x")


if __name__ == "__main__":
    main()
