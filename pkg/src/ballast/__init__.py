"""Ballast detection and reduction for tabular, semi-structured, sparse, and
text datasets.

The package computes normalized utility and redundancy signals per feature
(or per sentence), aggregates them into a ballast score, and prunes under a
threshold with before/after model evaluation. See the README for the CLI.
"""

from ballast.core import (
    Dataset,
    FeatureColumn,
    SignalTable,
    SparseMatrix,
    Target,
    flatten_jsonl,
    ingest_signals,
    load_csv,
    storage_bytes,
)
from ballast.errors import BallastError, ConfigError, DataError, EmptyResultError
from ballast.score import (
    BallastReport,
    ScoreConfig,
    candidate_rule,
    dataset_ballast_index,
    normalize_signals,
    product_ballast_score,
    prune,
    vote_ballast,
    weighted_ballast_score,
)

__version__ = "0.1.0"

__all__ = [
    "BallastError",
    "BallastReport",
    "ConfigError",
    "DataError",
    "Dataset",
    "EmptyResultError",
    "FeatureColumn",
    "ScoreConfig",
    "SignalTable",
    "SparseMatrix",
    "Target",
    "__version__",
    "candidate_rule",
    "dataset_ballast_index",
    "flatten_jsonl",
    "ingest_signals",
    "load_csv",
    "normalize_signals",
    "product_ballast_score",
    "prune",
    "storage_bytes",
    "vote_ballast",
    "weighted_ballast_score",
]
