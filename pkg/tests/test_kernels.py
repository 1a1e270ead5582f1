"""Cross-backend equivalence: the compiled kernel must be bit-identical to
the pure-Python one, which in turn must match single-point evaluation."""

import random

import pytest

from stemma.kernels import active_backend, available_backends
from stemma.neat import (
    InnovationTable,
    MutationConfig,
    compile,
    evaluate,
    mutate,
    random_seed_genome,
)
from stemma.neat.network import output_brightness

BACKENDS = available_backends()


def grown_genome(seed, steps):
    rng = random.Random(seed)
    table = InnovationTable()
    g = random_seed_genome(rng)
    for _ in range(steps):
        g = mutate(g, MutationConfig(), table, rng)
    return g


def test_backend_selected():
    assert active_backend() in BACKENDS


@pytest.mark.skipif("native" not in BACKENDS, reason="compiled kernel not built")
def test_backends_bit_identical_on_random_genomes():
    pure, native = BACKENDS["pure"], BACKENDS["native"]
    for seed in range(10):
        net = compile(grown_genome(seed, 15))
        for w, h in ((1, 1), (7, 5), (32, 32)):
            assert pure.render_gray(net, w, h) == native.render_gray(net, w, h), \
                f"seed {seed} at {w}x{h}"


@pytest.mark.parametrize("backend", sorted(BACKENDS))
def test_render_matches_pointwise_evaluate(backend):
    impl = BACKENDS[backend]
    net = compile(grown_genome(77, 20))
    w = h = 9
    img = impl.render_gray(net, w, h)
    for j in range(h):
        y = -1.0 + 2.0 * (j + 0.5) / h
        for i in range(w):
            x = -1.0 + 2.0 * (i + 0.5) / w
            assert img[j * w + i] == output_brightness(evaluate(net, x, y))


@pytest.mark.parametrize("backend", sorted(BACKENDS))
def test_render_deterministic_per_backend(backend):
    impl = BACKENDS[backend]
    net = compile(grown_genome(3, 10))
    assert impl.render_gray(net, 24, 24) == impl.render_gray(net, 24, 24)
