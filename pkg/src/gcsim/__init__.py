"""Straggler-tolerant distributed GD simulator: gradient coding with static
and dynamic worker clustering."""

from .assignment import (
    ClusterAssignment,
    DataAssignment,
    cluster_batches,
    derive_data_assignment,
    dynamic_assignment_matrix,
    feasibility_check,
    static_assignment,
)
from .coding import (
    ClusterCode,
    Codeword,
    NotDecodable,
    build_cluster_code,
    decode_cluster,
    evaluate_codeword,
)
from .engine import (
    ALL_SCHEMES,
    ExperimentConfig,
    ExperimentResult,
    IterationRecord,
    run_experiment,
)
from .scheduler import NoResolution, Placement, assign_clusters
from .stragglers import StragglerConfig, StragglerState

__version__ = "0.1.0"

__all__ = [
    "ALL_SCHEMES",
    "ClusterAssignment",
    "ClusterCode",
    "Codeword",
    "DataAssignment",
    "ExperimentConfig",
    "ExperimentResult",
    "IterationRecord",
    "NoResolution",
    "NotDecodable",
    "Placement",
    "StragglerConfig",
    "StragglerState",
    "assign_clusters",
    "build_cluster_code",
    "cluster_batches",
    "decode_cluster",
    "derive_data_assignment",
    "dynamic_assignment_matrix",
    "evaluate_codeword",
    "feasibility_check",
    "run_experiment",
    "static_assignment",
]
