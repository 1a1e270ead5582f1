"""Independent oracles used by the test suite.

These deliberately avoid the library's genome classes and network compiler:
they work on the raw canonical JSON and use their own graph routines, so a
bug in the implementation cannot hide inside its own checker.
"""

from __future__ import annotations

import json
import math

FIXED = {0: ("input",), 1: ("input",), 2: ("input",), 3: ("bias",), 4: ("output",)}
ACTS = {"linear", "sigmoid", "sine", "cosine", "gaussian"}


def check_genome_blob(blob: bytes) -> list[str]:
    """Structural invariant check over a canonical genome blob.

    Returns a list of violation strings (empty = valid).
    """
    problems = []
    doc = json.loads(blob.decode("utf-8"))
    nodes = doc["nodes"]
    conns = doc["connections"]

    ids = [n["node_id"] for n in nodes]
    if len(set(ids)) != len(ids):
        problems.append("duplicate node ids")
    kinds = {n["node_id"]: n["kind"] for n in nodes}
    for fid, allowed in FIXED.items():
        if kinds.get(fid) not in allowed:
            problems.append(f"fixed node {fid} missing or wrong kind")
    for n in nodes:
        if n["activation"] not in ACTS:
            problems.append(f"bad activation {n['activation']}")
        if n["node_id"] > 4 and n["kind"] != "hidden":
            problems.append(f"node {n['node_id']} should be hidden")

    innos = [c["innovation"] for c in conns]
    if len(set(innos)) != len(innos):
        problems.append("duplicate innovations")
    pairs = [(c["from"], c["to"]) for c in conns]
    if len(set(pairs)) != len(pairs):
        problems.append("duplicate (from,to) pairs")
    for c in conns:
        if c["from"] not in kinds or c["to"] not in kinds:
            problems.append(f"connection {c['innovation']} dangles")
            continue
        if kinds[c["to"]] in ("input", "bias"):
            problems.append(f"connection {c['innovation']} into input/bias")
        if kinds[c["from"]] == "output":
            problems.append(f"connection {c['innovation']} out of output")
        if not (-3.0 <= c["weight"] <= 3.0):
            problems.append(f"weight {c['weight']} out of range")

    # acyclicity over enabled connections, independent DFS
    adj = {}
    for c in conns:
        if c["enabled"]:
            adj.setdefault(c["from"], []).append(c["to"])

    state = {}

    def visit(node):
        state[node] = 1
        for nxt in adj.get(node, ()):
            if state.get(nxt) == 1:
                return True
            if state.get(nxt) is None and visit(nxt):
                return True
        state[node] = 2
        return False

    for nid in ids:
        if state.get(nid) is None and visit(nid):
            problems.append("cycle over enabled connections")
            break
    return problems


def recursive_evaluate(blob: bytes, x: float, y: float) -> float:
    """Recursive-with-memoization network evaluator over the raw blob.

    Incoming connections are accumulated in innovation order, matching the
    specified canonical accumulation order.
    """
    doc = json.loads(blob.decode("utf-8"))
    acts = {n["node_id"]: n["activation"] for n in doc["nodes"]}
    incoming: dict[int, list] = {}
    for c in sorted(doc["connections"], key=lambda c: c["innovation"]):
        if c["enabled"]:
            incoming.setdefault(c["to"], []).append((c["from"], c["weight"]))

    def act(kind, v):
        if kind == "linear":
            return v
        if kind == "sigmoid":
            z = -4.9 * v
            if z > 700.0:
                return -1.0
            return 2.0 / (1.0 + math.exp(z)) - 1.0
        if kind == "sine":
            return math.sin(v)
        if kind == "cosine":
            return math.cos(v)
        return math.exp(-(v * v))

    memo = {0: x, 1: y, 2: math.sqrt(x * x + y * y), 3: 1.0}

    def value(node):
        if node in memo:
            return memo[node]
        memo[node] = 0.0  # placeholder; graph is acyclic so never observed
        total = 0.0
        for src, w in incoming.get(node, ()):
            total += w * value(src)
        result = act(acts[node], total)
        memo[node] = result
        return result

    return value(4)


def all_topological_orders(nodes, edges):
    """Enumerate every topological order of a small DAG (oracle use only)."""
    orders = []
    edges = list(edges)

    def backtrack(remaining, prefix):
        if not remaining:
            orders.append(tuple(prefix))
            return
        blocked = {d for s, d in edges if s in remaining}
        for node in sorted(remaining):
            if node not in blocked:
                backtrack(remaining - {node}, prefix + [node])

    backtrack(set(nodes), [])
    return orders
