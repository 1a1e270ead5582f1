#!/usr/bin/env python3
"""Benchmark the raster kernels: pure Python vs compiled.

Usage: python3 benchmarks/bench_render.py [--repeats N]

Renders CPPN networks of three sizes at three resolutions with every
available backend and prints per-image times plus the speedup, verifying
along the way that all backends produce identical bytes.
"""

import argparse
import random
import time

from stemma.kernels import available_backends
from stemma.neat import InnovationTable, MutationConfig, compile, mutate, random_seed_genome


def grow(steps, seed=12):
    rng = random.Random(seed)
    table = InnovationTable()
    g = random_seed_genome(rng)
    for _ in range(steps):
        g = mutate(g, MutationConfig(), table, rng)
    return g


def time_render(impl, net, w, h, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = impl.render_gray(net, w, h)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(sorted(backends))}")
    genomes = {
        "seed (4 conns)": grow(0),
        "small (~15 mutations)": grow(15),
        "large (~60 mutations)": grow(60),
    }
    sizes = ((64, 64), (128, 128), (256, 256))

    header = f"{'genome':<24}{'size':<10}" + "".join(f"{name:>12}" for name in sorted(backends))
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, genome in genomes.items():
        net = compile(genome)
        for w, h in sizes:
            times = {}
            outputs = {}
            for name in sorted(backends):
                times[name], outputs[name] = time_render(
                    backends[name], net, w, h, args.repeats)
            row = f"{label:<24}{f'{w}x{h}':<10}"
            row += "".join(f"{times[name] * 1000:>10.2f}ms" for name in sorted(times))
            if len(backends) > 1:
                assert outputs["pure"] == outputs["native"], "backends disagree!"
                row += f"{times['pure'] / times['native']:>9.1f}x"
            print(row)


if __name__ == "__main__":
    main()
