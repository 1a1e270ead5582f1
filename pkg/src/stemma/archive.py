"""Persistent, append-only, content-addressed artifact archive.

Every published artifact is one JSON line in <path>/artifacts.jsonl;
indexes (id map, per-domain seq lists, child lists) are rebuilt on open.
Identity is the SHA-256 of (domain, genome blob, sorted parent ids), so
republishing an identical triple is a no-op that returns the original
record. Writes are serialized through one lock; readers share the handle
freely.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from collections import deque
from dataclasses import dataclass

from .errors import (
    CorruptStore,
    CrossDomainParent,
    InvalidArgument,
    InvalidGenome,
    NotFound,
    UnknownDomain,
    UnknownParent,
)

log = logging.getLogger("stemma.archive")

LOG_FILENAME = "artifacts.jsonl"
MAX_PARENTS = 2
MAX_PAGE_LIMIT = 500

_RECORD_KEYS = ("artifact_id", "seq", "domain_id", "parent_ids", "generation",
                "author", "created_at", "tags", "genome_blob")


def compute_artifact_id(domain_id: str, genome_blob: bytes, parent_ids) -> str:
    """Content digest of (domain, genome, sorted parents).

    SHA-256 over: domain_id, 0x0A, genome_blob, 0x0A, parent ids joined by
    commas. Author, tags and timestamps are deliberately excluded: the same
    discovery republished by someone else is the same artifact.
    """
    if isinstance(genome_blob, str):
        genome_blob = genome_blob.encode("utf-8")
    joined = ",".join(sorted(parent_ids)).encode("utf-8")
    h = hashlib.sha256()
    h.update(domain_id.encode("utf-8"))
    h.update(b"\n")
    h.update(genome_blob)
    h.update(b"\n")
    h.update(joined)
    return h.hexdigest()


@dataclass(frozen=True)
class ArtifactRecord:
    artifact_id: str
    seq: int
    domain_id: str
    genome_blob: bytes
    parent_ids: tuple[str, ...]
    generation: int
    author: str
    created_at: int  # unix epoch milliseconds
    tags: tuple[str, ...]

    def meta(self) -> dict:
        """JSON-ready metadata, genome excluded."""
        return {
            "artifact_id": self.artifact_id,
            "seq": self.seq,
            "domain_id": self.domain_id,
            "parent_ids": list(self.parent_ids),
            "generation": self.generation,
            "author": self.author,
            "created_at": self.created_at,
            "tags": list(self.tags),
        }

    def full(self) -> dict:
        doc = self.meta()
        doc["genome_blob"] = self.genome_blob.decode("utf-8")
        return doc


@dataclass(frozen=True)
class AncestryGraph:
    nodes: tuple[ArtifactRecord, ...]
    edges: tuple[tuple[str, str], ...]  # (parent_id, child_id)
    roots: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "nodes": [r.meta() for r in self.nodes],
            "edges": [list(e) for e in self.edges],
            "roots": list(self.roots),
        }


def _record_to_line(rec: ArtifactRecord) -> bytes:
    doc = {
        "artifact_id": rec.artifact_id,
        "seq": rec.seq,
        "domain_id": rec.domain_id,
        "parent_ids": list(rec.parent_ids),
        "generation": rec.generation,
        "author": rec.author,
        "created_at": rec.created_at,
        "tags": list(rec.tags),
        "genome_blob": rec.genome_blob.decode("utf-8"),
    }
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False).encode("utf-8") + b"\n"


def _line_to_record(line: bytes) -> ArtifactRecord:
    doc = json.loads(line.decode("utf-8"))
    if not isinstance(doc, dict) or tuple(doc.keys()) != _RECORD_KEYS:
        raise ValueError("unexpected record shape")
    if not (type(doc["seq"]) is int and type(doc["generation"]) is int
            and type(doc["created_at"]) is int):
        raise ValueError("numeric fields must be integers")
    if not (isinstance(doc["artifact_id"], str) and isinstance(doc["domain_id"], str)
            and isinstance(doc["author"], str) and isinstance(doc["genome_blob"], str)):
        raise ValueError("string fields malformed")
    if not isinstance(doc["parent_ids"], list) or not isinstance(doc["tags"], list):
        raise ValueError("list fields malformed")
    return ArtifactRecord(
        artifact_id=doc["artifact_id"],
        seq=doc["seq"],
        domain_id=doc["domain_id"],
        genome_blob=doc["genome_blob"].encode("utf-8"),
        parent_ids=tuple(doc["parent_ids"]),
        generation=doc["generation"],
        author=doc["author"],
        created_at=doc["created_at"],
        tags=tuple(doc["tags"]),
    )


class JsonlBackend:
    """Append-only JSON-Lines storage.

    Recovery contract: scan() yields the newline-terminated, parseable prefix.
    A torn final line (crash mid-append) is discarded with a warning and
    truncated away before new writes; a malformed line anywhere else raises
    CorruptStore.
    """

    def __init__(self, path: str):
        os.makedirs(path, exist_ok=True)
        self.log_path = os.path.join(path, LOG_FILENAME)
        self._records = self._recover()
        self._fh = open(self.log_path, "ab")

    def _recover(self) -> list[ArtifactRecord]:
        records: list[ArtifactRecord] = []
        if not os.path.exists(self.log_path):
            return records
        with open(self.log_path, "rb") as fh:
            data = fh.read()
        offset = 0
        good_end = 0
        lineno = 0
        while offset < len(data):
            nl = data.find(b"\n", offset)
            if nl == -1:
                log.warning("discarding torn final line at byte %d of %s",
                            offset, self.log_path)
                break
            lineno += 1
            line = data[offset:nl]
            try:
                records.append(_line_to_record(line))
            except (ValueError, UnicodeDecodeError) as exc:
                if data.find(b"\n", nl + 1) == -1:
                    # terminated but unparseable final line: treat as torn
                    log.warning("discarding malformed final line %d of %s (%s)",
                                lineno, self.log_path, exc)
                    break
                raise CorruptStore(lineno, f"line {lineno}: {exc}") from None
            offset = nl + 1
            good_end = offset
        if good_end < len(data):
            with open(self.log_path, "r+b") as fh:
                fh.truncate(good_end)
        return records

    def drain_recovered(self) -> list[ArtifactRecord]:
        records, self._records = self._records, []
        return records

    def append(self, record: ArtifactRecord) -> int:
        self._fh.write(_record_to_line(record))
        self._fh.flush()
        return record.seq

    def sync(self) -> None:
        self._fh.flush()
        os.fsync(self._fh.fileno())

    def close(self) -> None:
        if not self._fh.closed:
            self._fh.flush()
            os.fsync(self._fh.fileno())
            self._fh.close()


class Archive:
    """In-memory indexes over a storage backend; the publish committer."""

    def __init__(self, backend, registry):
        self.registry = registry
        self._backend = backend
        self._lock = threading.RLock()
        self._by_id: dict[str, ArtifactRecord] = {}
        self._by_seq: list[ArtifactRecord] = []
        self._domain_seqs: dict[str, list[int]] = {}
        self._children: dict[str, list[str]] = {}
        for rec in backend.drain_recovered():
            self._index(rec)

    def _index(self, rec: ArtifactRecord) -> None:
        self._by_id[rec.artifact_id] = rec
        self._by_seq.append(rec)
        self._domain_seqs.setdefault(rec.domain_id, []).append(rec.seq)
        for pid in rec.parent_ids:
            self._children.setdefault(pid, []).append(rec.artifact_id)

    # -- write path ---------------------------------------------------------

    def publish(self, domain_id: str, genome_blob: bytes, parent_ids=(),
                author: str = "", tags=()) -> ArtifactRecord:
        """Commit a new artifact, or return the existing record for a
        previously published (domain, genome, parents) triple."""
        if isinstance(genome_blob, str):
            genome_blob = genome_blob.encode("utf-8")
        domain = self.registry.get(domain_id)  # raises UnknownDomain
        domain.validate(genome_blob)  # raises InvalidGenome
        parents = sorted(parent_ids)
        if len(parents) > MAX_PARENTS:
            raise InvalidArgument(f"at most {MAX_PARENTS} parents, got {len(parents)}")
        if len(set(parents)) != len(parents):
            raise InvalidArgument("duplicate parent ids")
        with self._lock:
            for pid in parents:
                parent = self._by_id.get(pid)
                if parent is None:
                    raise UnknownParent(f"unknown parent {pid}")
                if parent.domain_id != domain_id:
                    raise CrossDomainParent(
                        f"parent {pid} belongs to domain {parent.domain_id!r}")
            artifact_id = compute_artifact_id(domain_id, genome_blob, parents)
            existing = self._by_id.get(artifact_id)
            if existing is not None:
                return existing
            generation = 0
            if parents:
                generation = 1 + max(self._by_id[p].generation for p in parents)
            rec = ArtifactRecord(
                artifact_id=artifact_id,
                seq=len(self._by_seq) + 1,
                domain_id=domain_id,
                genome_blob=bytes(genome_blob),
                parent_ids=tuple(parents),
                generation=generation,
                author=author,
                created_at=time.time_ns() // 1_000_000,
                tags=tuple(tags),
            )
            self._backend.append(rec)
            self._index(rec)
            return rec

    # -- read path ----------------------------------------------------------

    def get(self, artifact_id: str) -> ArtifactRecord:
        with self._lock:
            rec = self._by_id.get(artifact_id)
        if rec is None:
            raise NotFound(f"no artifact {artifact_id}")
        return rec

    def __len__(self) -> int:
        with self._lock:
            return len(self._by_seq)

    def list(self, domain_id: str, offset: int = 0, limit: int = 50):
        """Page of records for one domain in seq order; returns (total, records)."""
        if domain_id not in self.registry:
            raise UnknownDomain(f"unknown domain {domain_id!r}")
        if offset < 0:
            raise InvalidArgument("offset must be non-negative")
        if not (1 <= limit <= MAX_PAGE_LIMIT):
            raise InvalidArgument(f"limit must be in 1..{MAX_PAGE_LIMIT}")
        with self._lock:
            seqs = self._domain_seqs.get(domain_id, [])
            page = [self._by_seq[s - 1] for s in seqs[offset:offset + limit]]
            return len(seqs), page

    def ancestry(self, artifact_id: str, direction: str = "up",
                 depth: int | None = None) -> AncestryGraph:
        """Transitive parents (up) or children (down) within `depth` hops;
        the queried artifact is always part of the graph."""
        if direction not in ("up", "down"):
            raise InvalidArgument("direction must be 'up' or 'down'")
        if depth is not None and depth < 0:
            raise InvalidArgument("depth must be non-negative")
        with self._lock:
            start = self._by_id.get(artifact_id)
            if start is None:
                raise NotFound(f"no artifact {artifact_id}")
            found: dict[str, ArtifactRecord] = {artifact_id: start}
            queue = deque([(artifact_id, 0)])
            while queue:
                current, dist = queue.popleft()
                if depth is not None and dist >= depth:
                    continue
                if direction == "up":
                    neighbors = self._by_id[current].parent_ids
                else:
                    neighbors = self._children.get(current, ())
                for nid in neighbors:
                    if nid not in found:
                        found[nid] = self._by_id[nid]
                        queue.append((nid, dist + 1))
            return self._graph_over(found)

    def phylogeny(self, domain_id: str) -> AncestryGraph:
        """Complete lineage DAG snapshot of one domain."""
        if domain_id not in self.registry:
            raise UnknownDomain(f"unknown domain {domain_id!r}")
        with self._lock:
            seqs = self._domain_seqs.get(domain_id, [])
            found = {}
            for s in seqs:
                rec = self._by_seq[s - 1]
                found[rec.artifact_id] = rec
            return self._graph_over(found)

    def _graph_over(self, found: dict[str, ArtifactRecord]) -> AncestryGraph:
        nodes = sorted(found.values(), key=lambda r: r.seq)
        edges = []
        non_roots = set()
        for rec in nodes:
            for pid in rec.parent_ids:
                if pid in found:
                    edges.append((pid, rec.artifact_id))
                    non_roots.add(rec.artifact_id)
        roots = tuple(r.artifact_id for r in nodes if r.artifact_id not in non_roots)
        return AncestryGraph(nodes=tuple(nodes), edges=tuple(edges), roots=roots)

    def scan(self):
        """All records in seq order (snapshot)."""
        with self._lock:
            return list(self._by_seq)

    # -- integrity ----------------------------------------------------------

    def validate(self) -> list[str]:
        """Recheck every archive invariant; returns violation descriptions."""
        violations = []
        records = self.scan()
        seen_ids = {}
        for i, rec in enumerate(records):
            label = f"seq {rec.seq} ({rec.artifact_id[:12]})"
            if rec.seq != i + 1:
                violations.append(f"{label}: seq not dense, expected {i + 1}")
            if rec.artifact_id in seen_ids:
                violations.append(f"{label}: duplicate artifact_id")
            seen_ids[rec.artifact_id] = rec
            want = compute_artifact_id(rec.domain_id, rec.genome_blob, rec.parent_ids)
            if want != rec.artifact_id:
                violations.append(f"{label}: stored artifact_id does not match content")
            if list(rec.parent_ids) != sorted(rec.parent_ids):
                violations.append(f"{label}: parent_ids not sorted")
            parent_gens = []
            for pid in rec.parent_ids:
                parent = seen_ids.get(pid)
                if parent is None:
                    violations.append(f"{label}: parent {pid[:12]} missing or not earlier")
                    continue
                if parent.seq >= rec.seq:
                    violations.append(f"{label}: parent seq {parent.seq} not smaller")
                if parent.domain_id != rec.domain_id:
                    violations.append(f"{label}: cross-domain parent {pid[:12]}")
                parent_gens.append(parent.generation)
            expected_gen = 0 if not rec.parent_ids else 1 + max(parent_gens, default=0)
            if rec.generation != expected_gen:
                violations.append(
                    f"{label}: generation {rec.generation}, expected {expected_gen}")
            if rec.domain_id in self.registry:
                try:
                    self.registry.get(rec.domain_id).validate(rec.genome_blob)
                except InvalidGenome as exc:
                    violations.append(f"{label}: invalid genome ({exc.message})")
        return violations

    def sync(self) -> None:
        with self._lock:
            self._backend.sync()

    def close(self) -> None:
        with self._lock:
            self._backend.close()


def open_store(path: str, registry=None) -> Archive:
    """Open (or create) an archive directory and rebuild its indexes."""
    if registry is None:
        from .domains import Registry
        registry = Registry.with_builtins()
    return Archive(JsonlBackend(path), registry)


def graph_to_dot(graph: AncestryGraph) -> str:
    """Render an ancestry graph in DOT: nodes labeled by seq, one edge per
    parent link."""
    lines = ["digraph phylogeny {"]
    for rec in graph.nodes:
        lines.append(f'  "{rec.artifact_id}" [label="{rec.seq}"];')
    for parent, child in graph.edges:
        lines.append(f'  "{parent}" -> "{child}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "ArtifactRecord", "AncestryGraph", "Archive", "JsonlBackend",
    "compute_artifact_id", "open_store", "graph_to_dot",
    "MAX_PARENTS", "MAX_PAGE_LIMIT", "LOG_FILENAME",
]
