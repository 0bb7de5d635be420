"""Per-feature statistical utility signals.

Entropy and mutual information use plug-in (empirical frequency) estimators
in bits. Numeric columns are discretized by equal-frequency (rank) binning:
the element at sort position p of n lands in bin ``p * bins // n`` and tied
values always share the bin of their first occurrence, so bin populations
differ by at most one whenever values are distinct. Missing cells never form
a bin; MI drops rows missing on either side.

The binned plug-in estimator is chosen over k-NN estimators for determinism;
it is positively biased on independent data by roughly
(bins-1)(classes-1) / (2 n ln 2) bits, which callers should keep in mind
when applying absolute MI thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ballast.core.dataset import NUMERIC, TEXT, FeatureColumn
from ballast.errors import ConfigError, DataError

DEFAULT_BINS = 16


def quantile_bins(values: np.ndarray, bins: int) -> np.ndarray:
    """Equal-frequency bin index per value (ties collapse to one bin)."""
    if bins < 2:
        raise ConfigError("bins must be >= 2")
    n = len(values)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(n, dtype=np.int64)
    ranks[order] = np.arange(n)
    raw = ranks * bins // n
    # collapse ties onto the bin of the run's first occurrence
    sorted_vals = values[order]
    run_start = np.concatenate(([True], sorted_vals[1:] != sorted_vals[:-1]))
    run_id = np.cumsum(run_start) - 1
    first_bin = np.zeros(run_id[-1] + 1, dtype=np.int64)
    first_bin[run_id[run_start]] = raw[order][run_start]
    out = np.empty(n, dtype=np.int64)
    out[order] = first_bin[run_id]
    return out


def _discretize(column: FeatureColumn, bins: int) -> np.ndarray:
    """Symbol per non-missing cell: category codes, or rank bins for numerics."""
    present = column.present_values()
    if present.size == 0:
        raise DataError(f"column {column.name!r}: empty support")
    if column.kind == NUMERIC:
        return quantile_bins(np.asarray(present, dtype=float), bins)
    # categorical / text: the values themselves are the symbols
    if column.kind == TEXT:
        _, codes = np.unique(np.asarray(present, dtype=object).astype(str), return_inverse=True)
        return codes
    return np.asarray(present, dtype=np.int64)


def _entropy_bits(counts: np.ndarray) -> float:
    total = counts.sum()
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum()) if p.size > 1 else 0.0


def shannon_entropy(column: FeatureColumn, bins: int = DEFAULT_BINS) -> float:
    """Plug-in Shannon entropy (bits) of the column's value distribution."""
    symbols = _discretize(column, bins)
    _, counts = np.unique(symbols, return_counts=True)
    return _entropy_bits(counts)


def normalized_entropy(column: FeatureColumn, bins: int = DEFAULT_BINS) -> float:
    """Entropy divided by log2(#occupied bins); 0 when a single bin is occupied."""
    symbols = _discretize(column, bins)
    _, counts = np.unique(symbols, return_counts=True)
    k = len(counts)
    if k <= 1:
        return 0.0
    return _entropy_bits(counts) / float(np.log2(k))


def mi_from_table(table: np.ndarray) -> float:
    """Plug-in mutual information (bits) of a joint count/probability table."""
    table = np.asarray(table, dtype=float)
    total = table.sum()
    if total <= 0:
        raise DataError("empty contingency table")
    p = table / total
    px = p.sum(axis=1, keepdims=True)
    py = p.sum(axis=0, keepdims=True)
    mask = p > 0
    mi = float((p[mask] * np.log2(p[mask] / (px @ py)[mask])).sum())
    return max(mi, 0.0)


def mutual_information(
    column: FeatureColumn,
    target,
    estimator: str = "quantile_binned",
    bins: int = DEFAULT_BINS,
) -> float:
    """MI (bits) between a feature column and the target.

    `target` is a Target or an integer/real array; real targets are rank
    binned like numeric features. Rows missing on either side are dropped.
    """
    if estimator not in ("quantile_binned", "plugin_categorical"):
        raise ConfigError(f"unknown MI estimator {estimator!r}")
    y = np.asarray(getattr(target, "values", target))
    if len(y) != len(column.values):
        raise DataError("target length mismatch")
    keep = ~column.missing_mask
    y = y[keep]
    if y.size == 0:
        raise DataError(f"column {column.name!r}: empty support")
    if np.issubdtype(y.dtype, np.floating):
        if np.unique(y).size < 2:
            raise DataError("degenerate target")
        y_sym = quantile_bins(y, bins)
    else:
        y_sym = y.astype(np.int64)
        if np.unique(y_sym).size < 2:
            raise DataError("degenerate target")

    sub = FeatureColumn(
        column.name,
        column.kind,
        column.values[keep],
        np.zeros(int(keep.sum()), dtype=bool),
        column.categories,
    )
    if column.kind == NUMERIC and estimator == "plugin_categorical":
        # treat numeric values as exact symbols
        _, x_sym = np.unique(sub.values, return_inverse=True)
    else:
        x_sym = _discretize(sub, bins)

    nx = int(x_sym.max()) + 1
    ny = int(y_sym.max()) + 1
    table = np.zeros((nx, ny), dtype=np.int64)
    np.add.at(table, (x_sym, y_sym), 1)
    return mi_from_table(table)


def variance(column: FeatureColumn) -> float:
    """Population variance over non-missing cells."""
    if column.kind != NUMERIC:
        raise DataError(f"variance requires a numeric column, got {column.kind!r}")
    present = column.present_values()
    if present.size == 0:
        raise DataError(f"column {column.name!r}: empty support")
    return float(np.var(present))


def sparsity(column: FeatureColumn) -> float:
    """Fraction of cells that are missing or exactly zero (numeric only for zeros)."""
    n = len(column.values)
    if n == 0:
        raise DataError(f"column {column.name!r}: empty support")
    empty = int(column.missing_mask.sum())
    if column.kind == NUMERIC:
        empty += int(np.count_nonzero(column.present_values() == 0.0))
    return empty / n


@dataclass(frozen=True)
class FeatureProfile:
    name: str
    kind: str
    entropy_bits: float
    norm_entropy: float
    variance: float | None
    sparsity: float
    mi_bits: float | None


def profile_column(column: FeatureColumn, target=None, bins: int = DEFAULT_BINS) -> FeatureProfile:
    return FeatureProfile(
        name=column.name,
        kind=column.kind,
        entropy_bits=shannon_entropy(column, bins),
        norm_entropy=normalized_entropy(column, bins),
        variance=variance(column) if column.kind == NUMERIC else None,
        sparsity=sparsity(column),
        mi_bits=mutual_information(column, target, bins=bins) if target is not None else None,
    )


def profile_dataset(dataset, bins: int = DEFAULT_BINS, threads: int = 1) -> list[FeatureProfile]:
    """Profile every column; column order preserved regardless of scheduling."""
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda c: profile_column(c, dataset.target, bins), dataset.columns))
    return [profile_column(c, dataset.target, bins) for c in dataset.columns]
