from ._awpkit import (
    ArgumentError,
    Error,
    InputError,
    InvariantError,
    Tree,
    construction,
    make_labels,
    node_discrepancy,
    optimal_pruning,
    pruning_discrepancy,
    read_weights,
    run_awp,
    run_baseline,
    split_quality,
    synthetic,
    tv_distance,
)

__all__ = [
    "ArgumentError",
    "Error",
    "InputError",
    "InvariantError",
    "Tree",
    "construction",
    "make_labels",
    "node_discrepancy",
    "optimal_pruning",
    "pruning_discrepancy",
    "read_weights",
    "run_awp",
    "run_baseline",
    "split_quality",
    "synthetic",
    "tv_distance",
]
