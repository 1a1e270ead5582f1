"""Domain plugin contract and registry.

A domain owns one evolvable representation: how to validate a genome blob,
seed a random one, mutate, recombine, and render it to a grayscale raster.
The platform (archive, sessions, server, CLI) only ever touches blobs through
this contract, so new domains plug in without touching the core.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass

from ..errors import DuplicateDomain, UnknownDomain

_ID_RE = re.compile(r"^[a-z0-9-]+$")


@dataclass(frozen=True)
class Raster:
    """Row-major grayscale pixels, 0 = black, 255 = white."""

    width: int
    height: int
    pixels: bytes

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("raster dimensions must be positive")
        if len(self.pixels) != self.width * self.height:
            raise ValueError("pixel buffer does not match dimensions")


@dataclass(frozen=True)
class DomainDescriptor:
    domain_id: str
    display_name: str
    default_render_size: tuple[int, int]

    def __post_init__(self):
        if not _ID_RE.match(self.domain_id):
            raise ValueError(f"invalid domain id {self.domain_id!r}")


class Domain:
    """Interface every domain plugin implements.

    All five operations are deterministic functions of their blob arguments
    and the rng state. mutate/crossover accept an optional opaque context
    created by new_context(); the picture domain uses it to share one
    innovation table across a session.
    """

    def validate(self, genome_blob: bytes) -> None:
        raise NotImplementedError

    def random_seed(self, rng) -> bytes:
        raise NotImplementedError

    def mutate(self, genome_blob: bytes, rng, ctx=None) -> bytes:
        raise NotImplementedError

    def crossover(self, a: bytes, b: bytes, rng, ctx=None) -> bytes:
        raise NotImplementedError

    def render(self, genome_blob: bytes, w: int, h: int) -> Raster:
        raise NotImplementedError

    def new_context(self, seed_blobs):
        """Per-session state shared by mutate/crossover calls; None by default."""
        return None


class Registry:
    """Domain registry; written at startup, read-only afterwards."""

    def __init__(self):
        self._domains: dict[str, tuple[DomainDescriptor, Domain]] = {}
        self._lock = threading.Lock()

    def register(self, descriptor: DomainDescriptor, implementation: Domain) -> None:
        with self._lock:
            if descriptor.domain_id in self._domains:
                raise DuplicateDomain(f"domain {descriptor.domain_id!r} already registered")
            self._domains[descriptor.domain_id] = (descriptor, implementation)

    def get(self, domain_id: str) -> Domain:
        try:
            return self._domains[domain_id][1]
        except KeyError:
            raise UnknownDomain(f"unknown domain {domain_id!r}") from None

    def descriptor(self, domain_id: str) -> DomainDescriptor:
        try:
            return self._domains[domain_id][0]
        except KeyError:
            raise UnknownDomain(f"unknown domain {domain_id!r}") from None

    def __contains__(self, domain_id: str) -> bool:
        return domain_id in self._domains

    def ids(self) -> list[str]:
        return sorted(self._domains)

    def descriptors(self) -> list[DomainDescriptor]:
        return [self._domains[i][0] for i in self.ids()]

    @staticmethod
    def with_builtins() -> "Registry":
        from .bitstring import BitstringDomain
        from .picture import PictureDomain

        reg = Registry()
        reg.register(
            DomainDescriptor("cppn-picture", "CPPN pictures", (128, 128)),
            PictureDomain(),
        )
        reg.register(
            DomainDescriptor("bitstring", "64-bit strings (onemax)", (64, 64)),
            BitstringDomain(),
        )
        return reg


__all__ = ["Raster", "DomainDescriptor", "Domain", "Registry"]
