import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import check_genome_blob
from stemma.errors import IncompatibleGenomes
from stemma.neat import (
    ConnectionGene,
    Genome,
    InnovationTable,
    MutationConfig,
    NodeGene,
    canonicalize,
    crossover,
    mutate,
    next_innovation,
    random_seed_genome,
)

ZERO = MutationConfig(p_weight_perturb=0.0, p_add_connection=0.0,
                      p_add_node=0.0, p_change_activation=0.0)


def test_mutate_with_zero_probabilities_is_identity(rng):
    g = random_seed_genome(rng)
    out = mutate(g, ZERO, InnovationTable(), rng)
    assert canonicalize(out) == canonicalize(g)


def test_add_node_structure(rng):
    cfg = MutationConfig(p_weight_perturb=0.0, p_add_connection=0.0,
                         p_add_node=1.0, p_change_activation=0.0)
    g = random_seed_genome(rng)
    table = InnovationTable()
    out = mutate(g, cfg, table, rng)
    assert len(out.nodes) == 6
    assert len(out.connections) == 6
    disabled = [c for c in out.connections if not c.enabled]
    assert len(disabled) == 1
    old = disabled[0]
    new_node = out.nodes[-1]
    assert new_node.node_id == 5 and new_node.kind == "hidden"
    in_conn = next(c for c in out.connections if c.dst == 5)
    out_conn = next(c for c in out.connections if c.src == 5)
    assert in_conn.src == old.src and in_conn.weight == 1.0
    assert out_conn.dst == old.dst and out_conn.weight == old.weight
    assert {in_conn.innovation, out_conn.innovation} == {5, 6}


def test_add_connection_only(rng):
    cfg = MutationConfig(p_weight_perturb=0.0, p_add_connection=1.0,
                         p_add_node=0.0, p_change_activation=0.0)
    table = InnovationTable()
    g = random_seed_genome(rng)
    out = mutate(g, cfg, table, rng)
    # the seed already wires every source to the output, so the only legal
    # new edges would repeat a pair; mutation must skip rather than violate
    assert len(out.connections) == 4
    # after adding a hidden node there are legal pairs again
    cfg2 = MutationConfig(p_weight_perturb=0.0, p_add_connection=1.0,
                          p_add_node=1.0, p_change_activation=0.0)
    out2 = mutate(g, cfg2, table, rng)
    assert len(out2.connections) in (6, 7)
    assert not check_genome_blob(canonicalize(out2))


def test_change_activation_targets_hidden_or_output(rng):
    cfg = MutationConfig(p_weight_perturb=0.0, p_add_connection=0.0,
                         p_add_node=0.0, p_change_activation=1.0)
    g = random_seed_genome(rng)
    for _ in range(20):
        out = mutate(g, cfg, InnovationTable(), rng)
        for a, b in zip(g.nodes[:4], out.nodes[:4]):
            assert a == b  # inputs and bias untouched


def test_mutation_closure_random_walk():
    rng = random.Random(99)
    cfg = MutationConfig()
    table = InnovationTable()
    g = random_seed_genome(rng)
    for i in range(300):
        g = mutate(g, cfg, table, rng)
        problems = check_genome_blob(canonicalize(g))
        assert not problems, f"step {i}: {problems}"


def test_crossover_with_self_is_identity(rng):
    table = InnovationTable()
    g = random_seed_genome(rng)
    for _ in range(5):
        g = mutate(g, MutationConfig(), table, rng)
    child = crossover(g, g, rng)
    assert canonicalize(child) == canonicalize(g)


def test_crossover_drops_excess_genes_from_second_parent(rng):
    table = InnovationTable()
    a = random_seed_genome(rng)
    cfg_add = MutationConfig(p_weight_perturb=0.0, p_add_connection=0.0,
                             p_add_node=1.0, p_change_activation=0.0)
    b = mutate(random_seed_genome(rng), cfg_add, table, rng)  # innovations 1..6
    assert {c.innovation for c in b.connections} == {1, 2, 3, 4, 5, 6}
    child = crossover(a, b, rng)
    assert {c.innovation for c in child.connections} == {1, 2, 3, 4}


def test_crossover_keeps_disjoint_genes_from_first_parent(rng):
    table = InnovationTable()
    cfg_add = MutationConfig(p_weight_perturb=0.0, p_add_connection=0.0,
                             p_add_node=1.0, p_change_activation=0.0)
    a = mutate(random_seed_genome(rng), cfg_add, table, rng)
    b = random_seed_genome(rng)
    child = crossover(a, b, rng)
    assert {c.innovation for c in child.connections} == {c.innovation
                                                         for c in a.connections}
    assert any(n.kind == "hidden" for n in child.nodes)


def test_crossover_rejects_incompatible_parent():
    nodes = [NodeGene(0, "input", "linear"), NodeGene(1, "input", "linear"),
             NodeGene(2, "input", "linear"), NodeGene(3, "bias", "linear"),
             NodeGene(4, "output", "sigmoid")]
    good = Genome.create(nodes, [ConnectionGene(1, 0, 4, 0.1, True)])
    bad = Genome.create(nodes[:4] + [NodeGene(4, "hidden", "sine")], [])
    with pytest.raises(IncompatibleGenomes):
        crossover(good, bad, random.Random(1))


def test_crossover_closure_random_pairs():
    rng = random.Random(31337)
    cfg = MutationConfig()
    table = InnovationTable()
    pool = [random_seed_genome(rng)]
    for _ in range(60):
        pool.append(mutate(pool[rng.randrange(len(pool))], cfg, table, rng))
    for i in range(300):
        a = pool[rng.randrange(len(pool))]
        b = pool[rng.randrange(len(pool))]
        child = crossover(a, b, rng)
        problems = check_genome_blob(canonicalize(child))
        assert not problems, f"pair {i}: {problems}"


def test_crossover_across_diverged_innovation_tables_stays_valid():
    # two lineages grown with independent tables: same numbers, different
    # meanings; closure must hold anyway
    rng = random.Random(7)
    cfg = MutationConfig()
    lineages = []
    for seed in (1, 2):
        r = random.Random(seed)
        table = InnovationTable()
        g = random_seed_genome(r)
        for _ in range(25):
            g = mutate(g, cfg, table, r)
        lineages.append(g)
    a, b = lineages
    for _ in range(50):
        child = crossover(a, b, rng)
        problems = check_genome_blob(canonicalize(child))
        assert not problems, problems


def test_next_innovation_helper():
    table = InnovationTable()
    assert next_innovation(table, 0, 4) == 5
    assert next_innovation(table, 0, 4) == 5


def test_structurally_identical_additions_share_innovations():
    # two genomes mutated under one table: the same structural addition
    # (same connection split, same new node id) gets the same numbers
    cfg = MutationConfig(p_weight_perturb=0.0, p_add_connection=0.0,
                         p_add_node=1.0, p_change_activation=0.0)
    table = InnovationTable()
    g1 = random_seed_genome(random.Random(5))
    g2 = random_seed_genome(random.Random(6))  # different weights, same shape
    m1 = mutate(g1, cfg, table, random.Random(77))
    m2 = mutate(g2, cfg, table, random.Random(77))  # same structural choice
    new1 = {c.innovation: (c.src, c.dst) for c in m1.connections if c.innovation > 4}
    new2 = {c.innovation: (c.src, c.dst) for c in m2.connections if c.innovation > 4}
    assert new1 == new2  # equal pairs got equal numbers from the shared table


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), steps=st.integers(1, 12))
def test_mutation_closure_property(seed, steps):
    rng = random.Random(seed)
    table = InnovationTable()
    g = random_seed_genome(rng)
    for _ in range(steps):
        g = mutate(g, MutationConfig(), table, rng)
    assert not check_genome_blob(canonicalize(g))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_determinism_property(seed):
    blob_a = canonicalize(random_seed_genome(random.Random(seed)))
    blob_b = canonicalize(random_seed_genome(random.Random(seed)))
    assert blob_a == blob_b
