"""Timing comparison of the numba kernels against the numpy fallback.

Run twice to compare the two paths:

    python3 benchmarks/bench_kernels.py
    SOCNLS_NO_NUMBA=1 python3 benchmarks/bench_kernels.py

The active path is printed in the header; numbers are best-of-5 wall times.
"""
import time

import numpy as np

from socnls import kernels


def best_of(fn, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    rng = np.random.default_rng(0)
    path = "numba" if kernels.NUMBA_ENABLED else "numpy fallback"
    print(f"kernel path: {path}")

    x = rng.standard_normal(1_000_000)
    kernels.ksum(x[:10])   # warm up any compilation
    t = best_of(lambda: kernels.ksum(x))
    print(f"ksum            1e6 floats        {t * 1e3:8.2f} ms")

    xs = np.abs(rng.standard_normal(200_000)) * 100.0
    kernels.bessel_array(3, xs[:10], 8.0)
    t = best_of(lambda: kernels.bessel_array(3, xs, 8.0))
    print(f"bessel_array    2e5 points l=3    {t * 1e3:8.2f} ms")

    pp = rng.standard_normal((512, 512)) + 1j * rng.standard_normal((512, 512))
    pm = rng.standard_normal((512, 512)) + 1j * rng.standard_normal((512, 512))
    kernels.nonlinear_phase(pp[:8, :8], pm[:8, :8], 1e-3, 1.0, 1.0, 1.0)
    t = best_of(lambda: kernels.nonlinear_phase(pp, pm, 1e-3, 1.0, 1.0, 1.0))
    print(f"nonlinear_phase 512^2 fields      {t * 1e3:8.2f} ms")


if __name__ == "__main__":
    main()
