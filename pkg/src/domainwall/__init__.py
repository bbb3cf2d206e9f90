"""Discrete variables encoded in Ising models.

Domain-wall and one-hot encodings of ``Z_m`` variables, problem builders for
colouring, scheduling and unstructured instances, subspace-preserving mixers,
Chimera and Pegasus hardware graphs, and a chain-growth minor embedder.
"""

from .embedding import EmbedParams, Embedding, find_embedding, min_embeddable_size, validate
from .encoding import EncodedProblem, Encoding, VariableHandle, encoding_metrics
from .exceptions import (
    AliasingError,
    DimensionError,
    DomainError,
    DomainWallError,
    InfeasibleError,
    MappingError,
    SizeLimitError,
)
from .hardware import HardwareGraph, chimera, edge_distance, interaction_graph, pegasus
from .ising import IsingBuilder, IsingModel, brute_force, energy, merge
from .mixers import build_mixer, check_subspace_preservation
from .problems import (
    ColoringInstance,
    SchedulingInstance,
    UnstructuredInstance,
    build_problem,
    classical_optimum,
    critical_ratio,
    gen_coloring,
    gen_scheduling,
    gen_unstructured,
)

__version__ = "0.1.0"

__all__ = [
    "AliasingError",
    "ColoringInstance",
    "DimensionError",
    "DomainError",
    "DomainWallError",
    "EmbedParams",
    "Embedding",
    "EncodedProblem",
    "Encoding",
    "HardwareGraph",
    "InfeasibleError",
    "IsingBuilder",
    "IsingModel",
    "MappingError",
    "SchedulingInstance",
    "SizeLimitError",
    "UnstructuredInstance",
    "VariableHandle",
    "brute_force",
    "build_mixer",
    "build_problem",
    "check_subspace_preservation",
    "chimera",
    "classical_optimum",
    "critical_ratio",
    "edge_distance",
    "encoding_metrics",
    "energy",
    "find_embedding",
    "gen_coloring",
    "gen_scheduling",
    "gen_unstructured",
    "interaction_graph",
    "merge",
    "min_embeddable_size",
    "pegasus",
    "validate",
]
