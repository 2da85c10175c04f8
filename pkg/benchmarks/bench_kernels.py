"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--terms N] [--points N] [--repeat R]

Both backends are imported side by side from ``_kernels``; the env flag only
picks which one the package uses by default.
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from laurent_envelopes import _kernels
from laurent_envelopes.bessel import limit_at_zero


def best_of(fn, repeat: int) -> float:
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--terms", type=int, default=20_000_000)
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    impls = [_kernels.numpy_impl]
    if _kernels.numba_impl is not None:
        impls.append(_kernels.numba_impl)
        # compile (or load from cache) outside the timed region
        _kernels.numba_impl.reciprocal_power_sum(0.0, 1.0, 1.0, 1, 1, 10)
        _kernels.numba_impl.bessel_series_grid(0.0, np.zeros(2), 1.0, 1e-17, 10)

    xs = np.linspace(-20.0, 20.0, args.points)
    lead = limit_at_zero(1.5)
    print(f"{'kernel':<22}{'backend':<8}{'seconds':>10}  result")
    timings = {}
    for impl in impls:
        box = {}

        def run_sum():
            box["sum"] = impl.reciprocal_power_sum(0.0, 1.0, 1.0, 1, 1, args.terms)

        def run_grid():
            box["grid"] = impl.bessel_series_grid(1.5, xs, lead, 1e-17, 4000)

        t_sum = best_of(run_sum, args.repeat)
        t_grid = best_of(run_grid, args.repeat)
        timings[impl.name] = (t_sum, t_grid)
        print(f"{'reciprocal_power_sum':<22}{impl.name:<8}{t_sum:>10.4f}  {box['sum']!r}")
        print(f"{'bessel_series_grid':<22}{impl.name:<8}{t_grid:>10.4f}  "
              f"checksum {float(np.sum(box['grid'])):.15e}")

    if len(timings) == 2:
        (a1, a2), (b1, b2) = timings["numpy"], timings["numba"]
        print(f"speedup numba/numpy: sum x{a1 / b1:.1f}, grid x{a2 / b2:.1f}")


if __name__ == "__main__":
    main()
