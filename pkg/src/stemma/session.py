"""Interactive-evolution sessions and the automated selection driver.

A session is an ephemeral workspace: it branches from published artifacts
(or fresh random seeds), holds a candidate population, applies selections,
and can publish any candidate back to the archive. Candidates record which
seed artifacts they descend from, and those become the published parents
(the public record only ever links published artifacts). Unpublished work
is deliberately volatile.
"""

from __future__ import annotations

import logging
import random
import secrets
import threading
import time
from dataclasses import dataclass, field

from .archive import MAX_PARENTS, Archive
from .errors import (
    CrossDomainParent,
    EmptySelection,
    IndexOutOfRange,
    InvalidArgument,
    InvalidPopSize,
    NotFound,
    SessionExpired,
    StaleEpoch,
    UnknownParent,
)
from .neat.ops import MutationConfig

log = logging.getLogger("stemma.session")

POP_SIZE_DEFAULT = 12
POP_SIZE_MIN = 2
POP_SIZE_MAX = 50
MAX_SEEDS = 8
CROSSOVER_PROB = MutationConfig().p_crossover


def _now_ms() -> int:
    return time.time_ns() // 1_000_000


@dataclass(frozen=True)
class CandidateGenome:
    genome_blob: bytes
    lineage_roots: tuple[str, ...]  # seed artifacts this candidate descends from


@dataclass
class Session:
    session_id: str
    domain_id: str
    seed_artifact_ids: tuple[str, ...]
    pop_size: int
    rng_seed: int
    candidates: list[CandidateGenome]
    step: int = 0
    op_epoch: int = 0
    last_activity: int = field(default_factory=_now_ms)

    def summary(self) -> dict:
        return {
            "session_id": self.session_id,
            "op_epoch": self.op_epoch,
            "step": self.step,
            "candidates": [
                {"index": i, "lineage_roots": list(c.lineage_roots)}
                for i, c in enumerate(self.candidates)
            ],
        }


class SessionManager:
    """Session table plus the operations that advance sessions.

    Per-session writes are guarded by the op_epoch check: a step with a stale
    epoch fails fast instead of silently interleaving with another tab.
    """

    def __init__(self, archive: Archive, pop_size_default: int = POP_SIZE_DEFAULT,
                 crossover_prob: float = CROSSOVER_PROB):
        self.archive = archive
        self.registry = archive.registry
        self.pop_size_default = pop_size_default
        self.crossover_prob = crossover_prob
        self._sessions: dict[str, Session] = {}
        self._rngs: dict[str, random.Random] = {}
        self._contexts: dict[str, object] = {}
        self._lock = threading.Lock()

    # -- lifecycle ----------------------------------------------------------

    def create(self, domain_id: str, seed_artifact_ids=(), pop_size: int | None = None,
               rng_seed: int | None = None) -> Session:
        domain = self.registry.get(domain_id)
        pop_size = self.pop_size_default if pop_size is None else pop_size
        if not (POP_SIZE_MIN <= pop_size <= POP_SIZE_MAX):
            raise InvalidPopSize(
                f"pop_size must be in {POP_SIZE_MIN}..{POP_SIZE_MAX}")
        seeds = list(seed_artifact_ids)
        if len(seeds) > MAX_SEEDS:
            raise InvalidArgument(f"at most {MAX_SEEDS} seed artifacts")
        seed_blobs = []
        for sid in seeds:
            try:
                rec = self.archive.get(sid)
            except NotFound:
                raise UnknownParent(f"unknown seed artifact {sid}") from None
            if rec.domain_id != domain_id:
                raise CrossDomainParent(
                    f"seed {sid} belongs to domain {rec.domain_id!r}")
            domain.validate(rec.genome_blob)  # defensive: store may be hand-edited
            seed_blobs.append(rec.genome_blob)

        if rng_seed is None:
            rng_seed = secrets.randbits(64)
        rng = random.Random(rng_seed)
        ctx = domain.new_context(seed_blobs)

        candidates = []
        if not seeds:
            for _ in range(pop_size):
                candidates.append(CandidateGenome(domain.random_seed(rng), ()))
        else:
            for _ in range(pop_size):
                pick = rng.randrange(len(seeds))
                blob = domain.mutate(seed_blobs[pick], rng, ctx)
                candidates.append(CandidateGenome(blob, (seeds[pick],)))

        session = Session(
            session_id=secrets.token_hex(16),
            domain_id=domain_id,
            seed_artifact_ids=tuple(seeds),
            pop_size=pop_size,
            rng_seed=rng_seed,
            candidates=candidates,
        )
        with self._lock:
            self._sessions[session.session_id] = session
            self._rngs[session.session_id] = rng
            self._contexts[session.session_id] = ctx
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise SessionExpired(f"no session {session_id}")
        return session

    def delete(self, session_id: str) -> None:
        with self._lock:
            if session_id not in self._sessions:
                raise SessionExpired(f"no session {session_id}")
            del self._sessions[session_id]
            del self._rngs[session_id]
            del self._contexts[session_id]

    def gc(self, now_ms: int | None = None, ttl_seconds: float = 3600) -> int:
        """Drop sessions idle longer than the ttl; returns how many."""
        now_ms = _now_ms() if now_ms is None else now_ms
        cutoff = now_ms - int(ttl_seconds * 1000)
        with self._lock:
            dead = [sid for sid, s in self._sessions.items() if s.last_activity < cutoff]
            for sid in dead:
                del self._sessions[sid]
                del self._rngs[sid]
                del self._contexts[sid]
        return len(dead)

    # -- evolution ----------------------------------------------------------

    def step_select(self, session_id: str, selected, op_epoch: int) -> Session:
        """Advance one generation: selected candidates survive unchanged in
        the first slots, the rest are refilled with mutants/recombinants of
        the selected parents."""
        session = self.get(session_id)
        with self._lock:
            if session.op_epoch != op_epoch:
                raise StaleEpoch(
                    f"expected op_epoch {session.op_epoch}, got {op_epoch}")
            sel = sorted(set(selected))
            if not sel:
                raise EmptySelection("selection must be nonempty")
            for idx in sel:
                if not isinstance(idx, int) or not (0 <= idx < session.pop_size):
                    raise IndexOutOfRange(f"candidate index {idx} out of range")
            rng = self._rngs[session_id]
            ctx = self._contexts[session_id]
            domain = self.registry.get(session.domain_id)

            parents = [session.candidates[i] for i in sel]
            next_gen = list(parents)  # elitism: survivors fill the first slots
            while len(next_gen) < session.pop_size:
                if len(parents) >= 2 and rng.random() < self.crossover_prob:
                    i = rng.randrange(len(parents))
                    j = rng.randrange(len(parents) - 1)
                    if j >= i:
                        j += 1
                    pa, pb = parents[i], parents[j]
                    blob = domain.crossover(pa.genome_blob, pb.genome_blob, rng, ctx)
                    blob = domain.mutate(blob, rng, ctx)
                    roots = tuple(sorted(set(pa.lineage_roots) | set(pb.lineage_roots)))
                else:
                    i = rng.randrange(len(parents))
                    pa = parents[i]
                    blob = domain.mutate(pa.genome_blob, rng, ctx)
                    roots = pa.lineage_roots
                next_gen.append(CandidateGenome(blob, roots))

            session.candidates = next_gen
            session.step += 1
            session.op_epoch += 1
            session.last_activity = _now_ms()
            return session

    def publish_candidate(self, session_id: str, index: int, author: str = "",
                          tags=()):
        """Publish one candidate; its parents are the session seeds it
        descends from (truncated to the archive's parent arity if needed)."""
        session = self.get(session_id)
        if not (0 <= index < session.pop_size):
            raise IndexOutOfRange(f"candidate index {index} out of range")
        candidate = session.candidates[index]
        parents = sorted(candidate.lineage_roots)
        if len(parents) > MAX_PARENTS:
            log.warning("candidate has %d lineage roots; keeping the %d smallest",
                        len(parents), MAX_PARENTS)
            parents = parents[:MAX_PARENTS]
        record = self.archive.publish(session.domain_id, candidate.genome_blob,
                                      parents, author=author, tags=tags)
        session.last_activity = _now_ms()
        return record

    def touch(self, session_id: str) -> None:
        session = self.get(session_id)
        session.last_activity = _now_ms()


# -- automated driver --------------------------------------------------------

class SelectionPolicy:
    """Replaces the human: picks survivors and the candidate worth publishing."""

    name = "policy"

    def choose(self, candidates, domain, rng) -> list[int]:
        raise NotImplementedError

    def top(self, candidates, domain, rng) -> int:
        raise NotImplementedError

    def score(self, blob, domain):
        """Score for choosing which published artifact to branch from, or
        None when the policy has no preference."""
        return None


class RandomPolicy(SelectionPolicy):
    """Keeps a uniformly chosen pair of candidates each step."""

    name = "random"

    def choose(self, candidates, domain, rng) -> list[int]:
        if len(candidates) < 2:
            return [0]
        i = rng.randrange(len(candidates))
        j = rng.randrange(len(candidates) - 1)
        if j >= i:
            j += 1
        return sorted((i, j))

    def top(self, candidates, domain, rng) -> int:
        return rng.randrange(len(candidates))


class OnemaxPolicy(SelectionPolicy):
    """Bitstring-only: always keeps the single highest-fitness candidate."""

    name = "onemax"

    def _fitness(self, blob, domain):
        if not hasattr(domain, "fitness"):
            raise InvalidArgument("onemax policy needs a domain with a fitness()")
        return domain.fitness(blob)

    def choose(self, candidates, domain, rng) -> list[int]:
        best = max(range(len(candidates)),
                   key=lambda i: (self._fitness(candidates[i].genome_blob, domain), -i))
        return [best]

    def top(self, candidates, domain, rng) -> int:
        return self.choose(candidates, domain, rng)[0]

    def score(self, blob, domain):
        return self._fitness(blob, domain)


POLICIES = {"random": RandomPolicy, "onemax": OnemaxPolicy}


@dataclass
class AutomatedRun:
    published_ids: list[str]
    best_fitness_trace: list[int]  # empty when the domain has no fitness


def run_automated(archive: Archive, domain_id: str, policy: SelectionPolicy,
                  steps: int, publish_every: int, rng_seed: int,
                  pop_size: int = POP_SIZE_DEFAULT, author: str | None = None) -> AutomatedRun:
    """Run policy-driven evolution against the archive.

    Branches from the best already-published artifact under the policy (or a
    fresh random population when the domain is empty), selects with the
    policy each step, and every `publish_every` steps publishes the policy's
    top candidate and re-branches a new session from it, which is what chains
    published artifacts into a lineage. Deterministic given rng_seed.
    """
    if steps < 1:
        raise InvalidArgument("steps must be >= 1")
    if publish_every < 1:
        raise InvalidArgument("publish_every must be >= 1")
    domain = archive.registry.get(domain_id)
    author = author if author is not None else f"auto:{policy.name}"
    rng = random.Random(rng_seed)
    manager = SessionManager(archive, pop_size_default=pop_size)

    def best_published_seed():
        total, _ = archive.list(domain_id, 0, 1)
        if total == 0:
            return None
        best_id, best_key = None, None
        offset = 0
        while offset < total:
            _, page = archive.list(domain_id, offset, 500)
            for rec in page:
                score = policy.score(rec.genome_blob, domain)
                key = (score if score is not None else 0, rec.seq)
                if best_key is None or key > best_key:
                    best_key, best_id = key, rec.artifact_id
            offset += 500
        return best_id

    def new_session(seed_id):
        seeds = [seed_id] if seed_id else []
        return manager.create(domain_id, seeds, pop_size, rng.getrandbits(64))

    session = new_session(best_published_seed())
    published: list[str] = []
    trace: list[int] = []
    has_fitness = hasattr(domain, "fitness")
    for t in range(1, steps + 1):
        sel = policy.choose(session.candidates, domain, rng)
        manager.step_select(session.session_id, sel, session.op_epoch)
        if has_fitness:
            trace.append(max(domain.fitness(c.genome_blob) for c in session.candidates))
        if t % publish_every == 0:
            idx = policy.top(session.candidates, domain, rng)
            rec = manager.publish_candidate(session.session_id, idx, author=author)
            published.append(rec.artifact_id)
            manager.delete(session.session_id)
            session = new_session(rec.artifact_id)
    return AutomatedRun(published_ids=published, best_fitness_trace=trace)


__all__ = [
    "CandidateGenome", "Session", "SessionManager",
    "SelectionPolicy", "RandomPolicy", "OnemaxPolicy", "POLICIES",
    "AutomatedRun", "run_automated",
    "POP_SIZE_DEFAULT", "POP_SIZE_MIN", "POP_SIZE_MAX", "MAX_SEEDS", "CROSSOVER_PROB",
]
