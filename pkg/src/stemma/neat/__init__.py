"""CPPN-NEAT engine: genomes, variation operators, network evaluation."""

from .genome import (
    ACTIVATION_KINDS,
    Genome,
    ConnectionGene,
    NodeGene,
    InnovationTable,
    canonicalize,
    is_canonical,
    parse_genome,
    validate_genome,
)
from .network import CompiledNetwork, activation, compile, evaluate, output_brightness
from .ops import MutationConfig, crossover, mutate, next_innovation, random_seed_genome

__all__ = [
    "ACTIVATION_KINDS", "Genome", "ConnectionGene", "NodeGene", "InnovationTable",
    "canonicalize", "is_canonical", "parse_genome", "validate_genome",
    "CompiledNetwork", "activation", "compile", "evaluate", "output_brightness",
    "MutationConfig", "crossover", "mutate", "next_innovation", "random_seed_genome",
]
