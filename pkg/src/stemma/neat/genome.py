"""CPPN genome representation: genes, canonical bytes, validation, innovations.

A genome is a NEAT-style pair of gene lists. Five nodes are fixed by
construction: 0 = input x, 1 = input y, 2 = input d (distance from origin),
3 = bias, 4 = output. Hidden nodes get ids 5 and up. The canonical byte form
(sorted genes, fixed key order, shortest round-trip floats) is what the
archive hashes and stores, so it must be stable down to the last byte.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, replace

from ..errors import InvalidGenome

INPUT = "input"
BIAS = "bias"
HIDDEN = "hidden"
OUTPUT = "output"
NODE_KINDS = (INPUT, BIAS, HIDDEN, OUTPUT)

LINEAR = "linear"
SIGMOID = "sigmoid"
SINE = "sine"
COSINE = "cosine"
GAUSSIAN = "gaussian"
ACTIVATION_KINDS = (LINEAR, SIGMOID, SINE, COSINE, GAUSSIAN)

# Fixed node layout shared by every genome.
INPUT_X, INPUT_Y, INPUT_D, BIAS_ID, OUTPUT_ID = 0, 1, 2, 3, 4
FIXED_KINDS = {INPUT_X: INPUT, INPUT_Y: INPUT, INPUT_D: INPUT,
               BIAS_ID: BIAS, OUTPUT_ID: OUTPUT}

WEIGHT_MIN = -3.0
WEIGHT_MAX = 3.0

# The four seed connections (x, y, d, bias -> output) always carry
# innovations 1..4, so any two lineages align on them.
SEED_INNOVATIONS = 4


@dataclass(frozen=True)
class NodeGene:
    node_id: int
    kind: str
    activation: str


@dataclass(frozen=True)
class ConnectionGene:
    innovation: int
    src: int
    dst: int
    weight: float
    enabled: bool


@dataclass(frozen=True)
class Genome:
    """Immutable genome; gene tuples are kept in canonical sort order."""

    nodes: tuple[NodeGene, ...]
    connections: tuple[ConnectionGene, ...]

    @staticmethod
    def create(nodes, connections) -> "Genome":
        return Genome(
            nodes=tuple(sorted(nodes, key=lambda n: n.node_id)),
            connections=tuple(sorted(connections, key=lambda c: c.innovation)),
        )

    def node_map(self) -> dict[int, NodeGene]:
        return {n.node_id: n for n in self.nodes}

    def max_node_id(self) -> int:
        return max(n.node_id for n in self.nodes)

    def max_innovation(self) -> int:
        return max((c.innovation for c in self.connections), default=0)


class InnovationTable:
    """Maps (src, dst) pairs to innovation numbers, allocating on first sight.

    The counter starts after the four seed innovations (or higher, when the
    table is created for a session whose seed genomes already carry larger
    numbers) so freshly allocated numbers never collide with inherited genes.
    Accessed under a lock: a table is shared by every mutation in one session.
    """

    def __init__(self, start: int = SEED_INNOVATIONS):
        self._pairs: dict[tuple[int, int], int] = {}
        self._counter = max(start, SEED_INNOVATIONS)
        self._lock = threading.Lock()

    def next(self, src: int, dst: int) -> int:
        with self._lock:
            key = (src, dst)
            num = self._pairs.get(key)
            if num is None:
                self._counter += 1
                num = self._counter
                self._pairs[key] = num
            return num

    @property
    def counter(self) -> int:
        return self._counter


def _has_cycle(node_ids, edges) -> bool:
    """DFS cycle check over the given directed edges."""
    adj: dict[int, list[int]] = {n: [] for n in node_ids}
    for src, dst in edges:
        adj[src].append(dst)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in node_ids}
    for start in node_ids:
        if color[start] != WHITE:
            continue
        stack = [(start, iter(adj[start]))]
        color[start] = GRAY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == GRAY:
                    return True
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, iter(adj[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()
    return False


def validate_genome(genome: Genome) -> None:
    """Raise InvalidGenome unless every structural invariant holds."""
    ids = [n.node_id for n in genome.nodes]
    if len(set(ids)) != len(ids):
        raise InvalidGenome("duplicate node ids")
    by_id = genome.node_map()
    for fixed_id, kind in FIXED_KINDS.items():
        node = by_id.get(fixed_id)
        if node is None or node.kind != kind:
            raise InvalidGenome(f"missing or mistyped fixed node {fixed_id}")
    for n in genome.nodes:
        if n.node_id < 0:
            raise InvalidGenome(f"negative node id {n.node_id}")
        if n.node_id > OUTPUT_ID and n.kind != HIDDEN:
            raise InvalidGenome(f"node {n.node_id} must be hidden")
        if n.kind not in NODE_KINDS:
            raise InvalidGenome(f"unknown node kind {n.kind!r}")
        if n.activation not in ACTIVATION_KINDS:
            raise InvalidGenome(f"unknown activation {n.activation!r}")

    innos = [c.innovation for c in genome.connections]
    if len(set(innos)) != len(innos):
        raise InvalidGenome("duplicate innovation numbers")
    pairs = [(c.src, c.dst) for c in genome.connections]
    if len(set(pairs)) != len(pairs):
        raise InvalidGenome("duplicate (from,to) pairs")
    for c in genome.connections:
        if c.innovation <= 0:
            raise InvalidGenome(f"non-positive innovation {c.innovation}")
        if c.src not in by_id or c.dst not in by_id:
            raise InvalidGenome(f"connection {c.innovation} references a missing node")
        if by_id[c.dst].kind in (INPUT, BIAS):
            raise InvalidGenome(f"connection {c.innovation} feeds an input/bias node")
        if by_id[c.src].kind == OUTPUT:
            raise InvalidGenome(f"connection {c.innovation} leaves the output node")
        if not math.isfinite(c.weight) or not (WEIGHT_MIN <= c.weight <= WEIGHT_MAX):
            raise InvalidGenome(f"weight {c.weight!r} outside [{WEIGHT_MIN}, {WEIGHT_MAX}]")

    enabled_edges = [(c.src, c.dst) for c in genome.connections if c.enabled]
    if _has_cycle(ids, enabled_edges):
        raise InvalidGenome("enabled connections form a cycle")


def canonicalize(genome: Genome) -> bytes:
    """Serialize to the canonical UTF-8 JSON byte form.

    Gene lists sorted, fixed key order, no whitespace, floats as Python repr
    (shortest round-trip). Idempotent: parsing and re-serializing any
    canonical blob reproduces it byte for byte.
    """
    validate_genome(genome)
    nodes = [
        {"node_id": n.node_id, "kind": n.kind, "activation": n.activation}
        for n in sorted(genome.nodes, key=lambda n: n.node_id)
    ]
    conns = [
        {"innovation": c.innovation, "from": c.src, "to": c.dst,
         "weight": c.weight, "enabled": c.enabled}
        for c in sorted(genome.connections, key=lambda c: c.innovation)
    ]
    doc = {"nodes": nodes, "connections": conns}
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def _require(cond: bool, why: str) -> None:
    if not cond:
        raise InvalidGenome(why)


def parse_genome(blob: bytes) -> Genome:
    """Parse a canonical (or at least well-formed) genome blob.

    Structural validation is strict about types: booleans are not accepted
    where integers are required and vice versa.
    """
    if isinstance(blob, str):
        blob = blob.encode("utf-8")
    try:
        doc = json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InvalidGenome(f"not valid JSON: {exc}") from None
    _require(isinstance(doc, dict) and set(doc) == {"nodes", "connections"},
             "top level must be an object with nodes and connections")
    nodes = []
    _require(isinstance(doc["nodes"], list), "nodes must be a list")
    for item in doc["nodes"]:
        _require(isinstance(item, dict) and set(item) == {"node_id", "kind", "activation"},
                 "node gene must have node_id, kind, activation")
        _require(type(item["node_id"]) is int, "node_id must be an integer")
        _require(isinstance(item["kind"], str) and isinstance(item["activation"], str),
                 "kind and activation must be strings")
        nodes.append(NodeGene(item["node_id"], item["kind"], item["activation"]))
    conns = []
    _require(isinstance(doc["connections"], list), "connections must be a list")
    for item in doc["connections"]:
        _require(isinstance(item, dict)
                 and set(item) == {"innovation", "from", "to", "weight", "enabled"},
                 "connection gene must have innovation, from, to, weight, enabled")
        _require(type(item["innovation"]) is int, "innovation must be an integer")
        _require(type(item["from"]) is int and type(item["to"]) is int,
                 "from/to must be integers")
        _require(type(item["weight"]) in (int, float) and type(item["weight"]) is not bool,
                 "weight must be a number")
        _require(type(item["enabled"]) is bool, "enabled must be a boolean")
        conns.append(ConnectionGene(item["innovation"], item["from"], item["to"],
                                    float(item["weight"]), item["enabled"]))
    genome = Genome.create(nodes, conns)
    validate_genome(genome)
    return genome


def is_canonical(blob: bytes) -> bool:
    try:
        return canonicalize(parse_genome(blob)) == bytes(blob)
    except InvalidGenome:
        return False


__all__ = [
    "NodeGene", "ConnectionGene", "Genome", "InnovationTable",
    "validate_genome", "canonicalize", "parse_genome", "is_canonical",
    "INPUT", "BIAS", "HIDDEN", "OUTPUT", "NODE_KINDS",
    "LINEAR", "SIGMOID", "SINE", "COSINE", "GAUSSIAN", "ACTIVATION_KINDS",
    "INPUT_X", "INPUT_Y", "INPUT_D", "BIAS_ID", "OUTPUT_ID",
    "WEIGHT_MIN", "WEIGHT_MAX", "SEED_INNOVATIONS", "replace",
]
