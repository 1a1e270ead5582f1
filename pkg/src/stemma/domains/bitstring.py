"""Bitstring reference domain: 64-bit genomes with exhaustively checkable ops.

Exists to prove the plugin contract on something trivially verifiable and to
give the automated driver a real fitness function (onemax = count of ones).
Blob format: {"bits":"0101..."} with exactly 64 characters of 0/1.
"""

from __future__ import annotations

import json

from ..errors import InvalidGenome
from . import Domain, Raster

BITS = 64
GRID = 8  # rendered as an 8x8 grid, scaled nearest-neighbor
FLIP_P = 1.0 / BITS


def _blob(bits: str) -> bytes:
    return json.dumps({"bits": bits}, separators=(",", ":")).encode("utf-8")


def _bits(genome_blob: bytes) -> str:
    if isinstance(genome_blob, str):
        genome_blob = genome_blob.encode("utf-8")
    try:
        doc = json.loads(genome_blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InvalidGenome(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or set(doc) != {"bits"} or not isinstance(doc["bits"], str):
        raise InvalidGenome('expected {"bits": "..."}')
    bits = doc["bits"]
    if len(bits) != BITS:
        raise InvalidGenome(f"expected {BITS} bits, got {len(bits)}")
    if set(bits) - {"0", "1"}:
        raise InvalidGenome("bits must be 0 or 1")
    if _blob(bits) != bytes(genome_blob):
        raise InvalidGenome("blob is not in canonical form")
    return bits


class BitstringDomain(Domain):
    def validate(self, genome_blob: bytes) -> None:
        _bits(genome_blob)

    def random_seed(self, rng) -> bytes:
        return _blob("".join("1" if rng.random() < 0.5 else "0" for _ in range(BITS)))

    def mutate(self, genome_blob: bytes, rng, ctx=None) -> bytes:
        bits = list(_bits(genome_blob))
        for i in range(BITS):
            if rng.random() < FLIP_P:
                bits[i] = "1" if bits[i] == "0" else "0"
        return _blob("".join(bits))

    def crossover(self, a: bytes, b: bytes, rng, ctx=None) -> bytes:
        bits_a, bits_b = _bits(a), _bits(b)
        child = "".join(
            bits_a[i] if rng.random() < 0.5 else bits_b[i] for i in range(BITS)
        )
        return _blob(child)

    def render(self, genome_blob: bytes, w: int, h: int) -> Raster:
        bits = _bits(genome_blob)
        out = bytearray(w * h)
        pos = 0
        for j in range(h):
            gj = j * GRID // h
            for i in range(w):
                gi = i * GRID // w
                out[pos] = 255 if bits[gj * GRID + gi] == "1" else 0
                pos += 1
        return Raster(w, h, bytes(out))

    def fitness(self, genome_blob: bytes) -> int:
        """Onemax: number of 1 bits. Used only by the automated driver."""
        return _bits(genome_blob).count("1")


__all__ = ["BitstringDomain", "BITS"]
