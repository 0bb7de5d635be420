"""Data model and ingestion."""

from ballast.core.dataset import (
    CATEGORICAL,
    NUMERIC,
    TEXT,
    Dataset,
    FeatureColumn,
    Target,
    categorical_column,
    numeric_column,
    text_column,
)
from ballast.core.io import flatten_jsonl, ingest_signals, load_csv
from ballast.core.signals import REDUNDANCY, UTILITY, SignalEntry, SignalTable
from ballast.core.sparse import SparseMatrix, StorageBytes, storage_bytes

__all__ = [
    "CATEGORICAL",
    "NUMERIC",
    "TEXT",
    "REDUNDANCY",
    "UTILITY",
    "Dataset",
    "FeatureColumn",
    "Target",
    "SignalEntry",
    "SignalTable",
    "SparseMatrix",
    "StorageBytes",
    "categorical_column",
    "numeric_column",
    "text_column",
    "flatten_jsonl",
    "ingest_signals",
    "load_csv",
    "storage_bytes",
]
