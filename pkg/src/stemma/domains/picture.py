"""CPPN picture domain: genomes are CPPN networks rendered over [-1,1]^2.

Pixel (i, j) samples the network at the pixel center,
x = -1 + 2*(i+0.5)/w, y = -1 + 2*(j+0.5)/h; the output is clamped to [-1, 1]
and scaled to a gray level with round-half-up, so renders are bit-exact and
a 1x1 render samples exactly (0, 0).
"""

from __future__ import annotations

from ..errors import InvalidGenome
from ..kernels import render_gray
from ..neat.genome import InnovationTable, canonicalize, parse_genome
from ..neat.network import compile as compile_network
from ..neat.ops import MutationConfig, crossover, mutate, random_seed_genome
from . import Domain, Raster


class PictureDomain(Domain):
    def __init__(self, config: MutationConfig | None = None):
        self.config = config or MutationConfig()

    def validate(self, genome_blob: bytes) -> None:
        genome = parse_genome(genome_blob)
        if canonicalize(genome) != bytes(genome_blob):
            raise InvalidGenome("blob is not in canonical form")

    def random_seed(self, rng) -> bytes:
        return canonicalize(random_seed_genome(rng))

    def new_context(self, seed_blobs) -> InnovationTable:
        top = 0
        for blob in seed_blobs:
            top = max(top, parse_genome(blob).max_innovation())
        return InnovationTable(start=top)

    def _table_for(self, genome, ctx) -> InnovationTable:
        if ctx is not None:
            return ctx
        # one-off call outside a session: ephemeral table above this genome
        return InnovationTable(start=genome.max_innovation())

    def mutate(self, genome_blob: bytes, rng, ctx=None) -> bytes:
        genome = parse_genome(genome_blob)
        table = self._table_for(genome, ctx)
        return canonicalize(mutate(genome, self.config, table, rng))

    def crossover(self, a: bytes, b: bytes, rng, ctx=None) -> bytes:
        child = crossover(parse_genome(a), parse_genome(b), rng)
        return canonicalize(child)

    def render(self, genome_blob: bytes, w: int, h: int) -> Raster:
        net = compile_network(parse_genome(genome_blob))
        return Raster(w, h, render_gray(net, w, h))


__all__ = ["PictureDomain"]
