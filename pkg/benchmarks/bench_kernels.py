#!/usr/bin/env python3
"""Benchmark the compiled kernel against the numpy fallback.

Times the two hot elementwise ops (wired-OR multiply on significands, raw
bfloat16 word multiply) on every available backend and prints a throughput
table. Run after an editable install:

    python benchmarks/bench_kernels.py [--size 4000000] [--repeats 5]
"""

import argparse
import time

import numpy as np

from wiredor import kernels
from wiredor.fp import BFLOAT16
from wiredor.mulconfig import MulConfig, Variant


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=4_000_000, help="elements per call")
    parser.add_argument("--repeats", type=int, default=5, help="best-of repeats")
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    sig = rng.integers(128, 256, size=args.size, dtype=np.uint64)
    sig2 = rng.integers(128, 256, size=args.size, dtype=np.uint64)
    words = rng.integers(0, 1 << 16, size=args.size, dtype=np.uint32)
    words2 = rng.integers(0, 1 << 16, size=args.size, dtype=np.uint32)

    cases = [
        ("or_mul fla", MulConfig(Variant.FLA, 8, fp_mode=True)),
        ("or_mul pc3_tr", MulConfig(Variant.PC3, 8, fp_mode=True, truncate=True)),
    ]
    backends = kernels.available_backends()
    print(f"elements per call: {args.size:,}   backends: {', '.join(backends)}")
    print(f"{'kernel':<16} {'backend':<8} {'best s':>9} {'Melem/s':>9}")

    results = {}
    for label, cfg in cases:
        for backend in backends:
            dt = best_of(lambda: kernels.or_mul_words(sig, sig2, cfg, backend=backend, validate=False), args.repeats)
            results[(label, backend)] = dt
            print(f"{label:<16} {backend:<8} {dt:9.4f} {args.size / dt / 1e6:9.1f}")

    cfg = MulConfig(Variant.PC3, 8, fp_mode=True, truncate=True)
    for backend in backends:
        dt = best_of(lambda: kernels.fp_mul_words(words, words2, BFLOAT16, cfg, backend=backend), args.repeats)
        results[("fp_mul bf16", backend)] = dt
        print(f"{'fp_mul bf16':<16} {backend:<8} {dt:9.4f} {args.size / dt / 1e6:9.1f}")

    if {"cython", "python"} <= set(backends):
        print("\nspeedup (python / cython):")
        for label in dict.fromkeys(lbl for lbl, _ in results):
            ratio = results[(label, "python")] / results[(label, "cython")]
            print(f"  {label:<16} {ratio:5.2f}x")


if __name__ == "__main__":
    main()
