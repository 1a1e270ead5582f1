"""Feed-forward compilation and deterministic evaluation of CPPN genomes.

compile() lowers a genome to a flat evaluation plan: a topological order over
the enabled connections plus per-node incoming (source, weight) lists. The
plan is consumed both by evaluate() here and by the raster kernels, which must
all produce bit-identical doubles. Keep the arithmetic in this file in sync
with kernels/_native.pyx: same operations, same order, no shortcuts.
"""

from __future__ import annotations

import heapq
import math
from array import array
from dataclasses import dataclass, field

from ..errors import CycleDetected, DanglingNode
from .genome import (
    ACTIVATION_KINDS,
    BIAS,
    BIAS_ID,
    INPUT,
    INPUT_D,
    INPUT_X,
    INPUT_Y,
    OUTPUT_ID,
    Genome,
)

# Activation codes shared with the compiled kernel.
ACT_LINEAR, ACT_SIGMOID, ACT_SINE, ACT_COSINE, ACT_GAUSSIAN = range(5)
_ACT_CODE = {kind: code for code, kind in enumerate(ACTIVATION_KINDS)}

# exp() overflows past ~709.78; above this the bipolar sigmoid is -1 anyway.
_SIGMOID_EXP_LIMIT = 700.0


def activation(kind: str, v: float) -> float:
    """Apply one of the five activation functions to a scalar."""
    return _apply_activation(_ACT_CODE[kind], v)


def _apply_activation(code: int, v: float) -> float:
    if code == ACT_LINEAR:
        return v
    if code == ACT_SIGMOID:
        z = -4.9 * v
        if z > _SIGMOID_EXP_LIMIT:
            return -1.0
        return 2.0 / (1.0 + math.exp(z)) - 1.0
    if code == ACT_SINE:
        return math.sin(v)
    if code == ACT_COSINE:
        return math.cos(v)
    return math.exp(-(v * v))


@dataclass
class CompiledNetwork:
    """Flat evaluation plan for one genome.

    Node ids are mapped to dense slots by ascending node_id, so the fixed
    nodes occupy slots 0..4. ``order`` lists the non-source slots in a valid
    topological order; ``in_start``/``in_count`` index into the flat
    ``src``/``wgt`` arrays. Incoming entries are kept in innovation order,
    which pins the floating-point accumulation order.
    """

    n_slots: int
    order: array          # array('i') of slots to evaluate, topological
    acts: array           # array('i') activation code per slot
    in_start: array       # array('i') per slot
    in_count: array       # array('i') per slot
    src: array            # array('i') flattened incoming source slots
    wgt: array            # array('d') flattened incoming weights
    slot_of: dict = field(default_factory=dict)


def compile(genome: Genome) -> CompiledNetwork:  # noqa: A001 - domain verb
    """Lower a genome to a CompiledNetwork (Kahn order, disabled edges dropped)."""
    node_ids = [n.node_id for n in genome.nodes]
    slot_of = {nid: i for i, nid in enumerate(node_ids)}
    n = len(node_ids)

    known = set(node_ids)
    for c in genome.connections:
        if c.src not in known or c.dst not in known:
            raise DanglingNode(f"connection {c.innovation} references a missing node")

    incoming: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    indegree = [0] * n
    outgoing: list[list[int]] = [[] for _ in range(n)]
    for c in genome.connections:  # connections are sorted by innovation
        if not c.enabled:
            continue
        s, d = slot_of[c.src], slot_of[c.dst]
        incoming[d].append((s, c.weight))
        indegree[d] += 1
        outgoing[s].append(d)

    ready = [i for i in range(n) if indegree[i] == 0]
    heapq.heapify(ready)
    topo: list[int] = []
    while ready:
        slot = heapq.heappop(ready)
        topo.append(slot)
        for d in outgoing[slot]:
            indegree[d] -= 1
            if indegree[d] == 0:
                heapq.heappush(ready, d)
    if len(topo) != n:
        raise CycleDetected("enabled connections form a cycle")

    source_slots = {slot_of[INPUT_X], slot_of[INPUT_Y], slot_of[INPUT_D], slot_of[BIAS_ID]}
    acts = array("i", [0] * n)
    for node in genome.nodes:
        acts[slot_of[node.node_id]] = _ACT_CODE[node.activation]

    order = array("i", [s for s in topo if s not in source_slots])
    in_start = array("i", [0] * n)
    in_count = array("i", [0] * n)
    src = array("i")
    wgt = array("d")
    for slot in range(n):
        in_start[slot] = len(src)
        in_count[slot] = len(incoming[slot])
        for s, w in incoming[slot]:
            src.append(s)
            wgt.append(w)

    return CompiledNetwork(n_slots=n, order=order, acts=acts,
                           in_start=in_start, in_count=in_count,
                           src=src, wgt=wgt, slot_of=slot_of)


def evaluate(net: CompiledNetwork, x: float, y: float) -> float:
    """Evaluate the network at one coordinate pair.

    Sources are preset (x, y, d = sqrt(x^2+y^2), bias = 1); every other node
    applies its activation to the weighted sum of its incoming values, zero
    when it has no incoming connections.
    """
    vals = [0.0] * net.n_slots
    vals[INPUT_X] = x
    vals[INPUT_Y] = y
    vals[INPUT_D] = math.sqrt(x * x + y * y)
    vals[BIAS_ID] = 1.0
    src, wgt = net.src, net.wgt
    in_start, in_count, acts = net.in_start, net.in_count, net.acts
    for slot in net.order:
        total = 0.0
        start = in_start[slot]
        for k in range(start, start + in_count[slot]):
            total += wgt[k] * vals[src[k]]
        vals[slot] = _apply_activation(acts[slot], total)
    return vals[OUTPUT_ID]


def output_brightness(o: float) -> int:
    """Map a raw output value to an 8-bit grayscale level.

    Clamp to [-1, 1], scale to [0, 255], round half up. NaN (possible only
    from degenerate inf*0 arithmetic) maps to mid-gray deterministically.
    """
    if o != o:
        o = 0.0
    if o < -1.0:
        o = -1.0
    elif o > 1.0:
        o = 1.0
    return int(math.floor(255.0 * (o + 1.0) / 2.0 + 0.5))


__all__ = [
    "CompiledNetwork", "compile", "evaluate", "activation", "output_brightness",
    "ACT_LINEAR", "ACT_SIGMOID", "ACT_SINE", "ACT_COSINE", "ACT_GAUSSIAN",
]
