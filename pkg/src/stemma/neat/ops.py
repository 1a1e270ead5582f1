"""Variation operators over CPPN genomes: seeding, mutation, crossover.

All operators are pure functions of (genome, rng, innovation table); the rng
draw order is part of the contract because session replay relies on it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from ..errors import IncompatibleGenomes
from .genome import (
    ACTIVATION_KINDS,
    BIAS,
    BIAS_ID,
    FIXED_KINDS,
    GAUSSIAN,
    HIDDEN,
    INPUT,
    INPUT_D,
    INPUT_X,
    INPUT_Y,
    LINEAR,
    OUTPUT,
    OUTPUT_ID,
    SIGMOID,
    WEIGHT_MAX,
    WEIGHT_MIN,
    ConnectionGene,
    Genome,
    InnovationTable,
    NodeGene,
)


@dataclass(frozen=True)
class MutationConfig:
    """Default evolutionary parameters.

    p_crossover is consumed by the session layer when two or more parents are
    selected; the rest drive mutate().
    """

    p_weight_perturb: float = 0.8
    weight_sigma: float = 0.3
    p_add_connection: float = 0.10
    p_add_node: float = 0.05
    p_change_activation: float = 0.10
    p_crossover: float = 0.30
    add_connection_retries: int = 20


def _clamp_weight(w: float) -> float:
    if w < WEIGHT_MIN:
        return WEIGHT_MIN
    if w > WEIGHT_MAX:
        return WEIGHT_MAX
    return w


def random_seed_genome(rng: random.Random) -> Genome:
    """Fresh minimal genome: the five fixed nodes, four enabled connections
    (x, y, d, bias -> output) with uniform [-1, 1] weights and innovations 1..4."""
    nodes = [
        NodeGene(INPUT_X, INPUT, LINEAR),
        NodeGene(INPUT_Y, INPUT, LINEAR),
        NodeGene(INPUT_D, INPUT, LINEAR),
        NodeGene(BIAS_ID, BIAS, LINEAR),
        NodeGene(OUTPUT_ID, OUTPUT, SIGMOID),
    ]
    conns = [
        ConnectionGene(i + 1, src, OUTPUT_ID, rng.uniform(-1.0, 1.0), True)
        for i, src in enumerate((INPUT_X, INPUT_Y, INPUT_D, BIAS_ID))
    ]
    return Genome.create(nodes, conns)


def _reaches(conns, start: int, goal: int) -> bool:
    """True if `goal` is reachable from `start` over enabled connections."""
    adj: dict[int, list[int]] = {}
    for c in conns:
        if c.enabled:
            adj.setdefault(c.src, []).append(c.dst)
    stack = [start]
    seen = set()
    while stack:
        node = stack.pop()
        if node == goal:
            return True
        if node in seen:
            continue
        seen.add(node)
        stack.extend(adj.get(node, ()))
    return False


def mutate(genome: Genome, cfg: MutationConfig, innos: InnovationTable,
           rng: random.Random) -> Genome:
    """Apply weight perturbation, add-node, add-connection and activation
    reassignment, in that order, each gated by its probability."""
    nodes = list(genome.nodes)
    conns = list(genome.connections)

    for i, c in enumerate(conns):
        if rng.random() < cfg.p_weight_perturb:
            w = _clamp_weight(c.weight + rng.gauss(0.0, cfg.weight_sigma))
            conns[i] = replace(c, weight=w)

    if rng.random() < cfg.p_add_node:
        enabled = [i for i, c in enumerate(conns) if c.enabled]
        if enabled:
            pick = enabled[rng.randrange(len(enabled))]
            old = conns[pick]
            new_id = max(n.node_id for n in nodes) + 1
            act = rng.choice(ACTIVATION_KINDS)
            conns[pick] = replace(old, enabled=False)
            nodes.append(NodeGene(new_id, HIDDEN, act))
            conns.append(ConnectionGene(innos.next(old.src, new_id),
                                        old.src, new_id, 1.0, True))
            conns.append(ConnectionGene(innos.next(new_id, old.dst),
                                        new_id, old.dst, old.weight, True))

    if rng.random() < cfg.p_add_connection:
        from_pool = [n.node_id for n in nodes if n.kind != OUTPUT]
        to_pool = [n.node_id for n in nodes if n.kind not in (INPUT, BIAS)]
        used = {(c.src, c.dst) for c in conns}
        for _ in range(cfg.add_connection_retries):
            src = from_pool[rng.randrange(len(from_pool))]
            dst = to_pool[rng.randrange(len(to_pool))]
            if src == dst or (src, dst) in used:
                continue
            if _reaches(conns, dst, src):  # adding src->dst would close a cycle
                continue
            conns.append(ConnectionGene(innos.next(src, dst), src, dst,
                                        rng.uniform(-1.0, 1.0), True))
            break

    if rng.random() < cfg.p_change_activation:
        pool = [i for i, n in enumerate(nodes) if n.kind in (HIDDEN, OUTPUT)]
        idx = pool[rng.randrange(len(pool))]
        nodes[idx] = replace(nodes[idx], activation=rng.choice(ACTIVATION_KINDS))

    return Genome.create(nodes, conns)


def crossover(a: Genome, b: Genome, rng: random.Random) -> Genome:
    """Recombine two genomes, NEAT-style, without fitness.

    Matching innovations pick either parent's gene uniformly; genes present
    only in `a` (the first-selected parent) are kept, genes only in `b` are
    dropped. Node genes come from `a`, plus any nodes that only the
    contributing parent knows. Innovation numbering can diverge between
    lineages, so duplicate (from,to) pairs keep the lower innovation and any
    resulting cycle is repaired by dropping disjoint genes, highest
    innovation first.
    """
    for g, name in ((a, "a"), (b, "b")):
        ids = {n.node_id: n.kind for n in g.nodes}
        for fixed_id, kind in FIXED_KINDS.items():
            if ids.get(fixed_id) != kind:
                raise IncompatibleGenomes(f"parent {name} lacks fixed node {fixed_id}")

    b_by_inno = {c.innovation: c for c in b.connections}
    b_nodes = b.node_map()
    a_nodes = a.node_map()

    child_nodes = dict(a_nodes)
    child_conns: list[ConnectionGene] = []
    matching: set[int] = set()
    seen_pairs: set[tuple[int, int]] = set()
    for gene in a.connections:
        other = b_by_inno.get(gene.innovation)
        if other is not None:
            matching.add(gene.innovation)
            pick, donor = (gene, a_nodes) if rng.random() < 0.5 else (other, b_nodes)
            for endpoint in (pick.src, pick.dst):
                if endpoint not in child_nodes:
                    child_nodes[endpoint] = donor[endpoint]
        else:
            pick = gene
        if (pick.src, pick.dst) in seen_pairs:
            continue
        seen_pairs.add((pick.src, pick.dst))
        child_conns.append(pick)

    def cyclic(conns) -> bool:
        from .genome import _has_cycle
        return _has_cycle(list(child_nodes), [(c.src, c.dst) for c in conns if c.enabled])

    while cyclic(child_conns):
        disjoint = [c for c in child_conns if c.innovation not in matching]
        if not disjoint:
            raise IncompatibleGenomes("cannot reconcile parent topologies")
        worst = max(disjoint, key=lambda c: c.innovation)
        child_conns = [c for c in child_conns if c.innovation != worst.innovation]

    return Genome.create(child_nodes.values(), child_conns)


def next_innovation(innos: InnovationTable, src: int, dst: int) -> int:
    return innos.next(src, dst)


__all__ = ["MutationConfig", "random_seed_genome", "mutate", "crossover",
           "next_innovation"]
