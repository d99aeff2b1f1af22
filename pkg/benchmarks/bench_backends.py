#!/usr/bin/env python3
"""Compare the compiled echo-synthesis kernel against the numpy fallback.

The kernel is the hot loop of dataset simulation: a coherent sum of
complex exponentials over the frequency x slow-time grid for every
scatterer. Everything downstream (range FFTs, STFT, reductions) already
runs inside numpy's compiled FFT code, so this is the one stage where a
bespoke extension pays off.

Usage: python benchmarks/bench_backends.py [--repeats N]
"""

import argparse
import time

import numpy as np

from twmd._backend import BACKEND
from twmd._kernels_py import accumulate_echo as kernel_numpy

try:
    from twmd._kernels import accumulate_echo as kernel_compiled
except ImportError:
    kernel_compiled = None


CASES = [
    # (label, n_freq, n_slow, n_scatterers)
    ("desk 3 s scene", 256, 339, 6),
    ("full-scale 3 s", 805, 339, 6),
    ("full-scale 30 s", 805, 3390, 6),
]


def time_kernel(fn, freqs, delays, amps, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(freqs, delays, amps)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    print(f"active backend at import: {BACKEND}")
    print(f"{'case':<18} {'grid':>16} {'numpy':>10} {'compiled':>10} {'speedup':>8}")
    for label, n, m, s in CASES:
        freqs = 380e6 + 5e6 * np.arange(n)
        delays = rng.uniform(2e-8, 1.5e-7, size=(s, m))
        amps = rng.uniform(0.1, 1.2, size=s)
        t_np = time_kernel(kernel_numpy, freqs, delays, amps, args.repeats)
        if kernel_compiled is None:
            print(f"{label:<18} {f'{n}x{m}x{s}':>16} {t_np * 1e3:>9.1f}ms {'n/a':>10} {'n/a':>8}")
            continue
        t_c = time_kernel(kernel_compiled, freqs, delays, amps, args.repeats)
        err = np.max(np.abs(kernel_compiled(freqs, delays, amps) - kernel_numpy(freqs, delays, amps)))
        print(
            f"{label:<18} {f'{n}x{m}x{s}':>16} {t_np * 1e3:>9.1f}ms {t_c * 1e3:>8.1f}ms "
            f"{t_np / t_c:>7.2f}x   (max |diff| {err:.2e})"
        )


if __name__ == "__main__":
    main()
