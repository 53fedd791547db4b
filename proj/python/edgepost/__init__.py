"""Exact edge posterior probabilities for Bayesian network structure."""

from ._core import (
    CapExceeded,
    Dataset,
    DimensionMismatch,
    EdgePosteriors,
    Error,
    IoError,
    Network,
    OverflowError,
    ParseError,
    PreconditionError,
    PriorSpec,
    RocCurve,
    brute_posteriors,
    downward_transform,
    edge_posteriors,
    generate_network,
    load_dataset,
    naive_downward,
    naive_upward,
    parse_dataset,
    roc,
    roc_from_scores,
    sample_data,
    uniform_noise_posteriors,
    upward_transform,
)

__all__ = [
    "CapExceeded",
    "Dataset",
    "DimensionMismatch",
    "EdgePosteriors",
    "Error",
    "IoError",
    "Network",
    "OverflowError",
    "ParseError",
    "PreconditionError",
    "PriorSpec",
    "RocCurve",
    "brute_posteriors",
    "downward_transform",
    "edge_posteriors",
    "generate_network",
    "load_dataset",
    "naive_downward",
    "naive_upward",
    "parse_dataset",
    "roc",
    "roc_from_scores",
    "sample_data",
    "uniform_noise_posteriors",
    "upward_transform",
]
