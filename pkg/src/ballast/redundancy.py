"""Pairwise redundancy signals and correlation-based pruning.

Correlations are computed pairwise-complete: each pair uses exactly the rows
where both columns are present. Degenerate pairs (fewer than two shared rows,
or zero variance on either side) are reported as 0 with a validity flag.

The pruning rule is greedy: features are visited by descending mean |r|, and
for every still-live pair above the threshold the member with the higher mean
|r| is dropped (ties drop the higher feature index). The elimination order is
a convention of this package; only the threshold comes from common practice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ballast.core.dataset import NUMERIC, Dataset
from ballast.errors import ConfigError, DataError


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    method: str
    names: list[str]
    values: np.ndarray  # m x m, symmetric, 0 where invalid
    valid: np.ndarray  # m x m bool

    @property
    def n_features(self) -> int:
        return len(self.names)

    def mean_abs(self) -> np.ndarray:
        """Mean |r| per feature over valid off-diagonal pairs (0 if none).

        Uses exact summation so duplicate columns (identical |r| multisets,
        summed in different orders) get exactly equal means and the filter's
        index tie-break stays deterministic.
        """
        m = self.n_features
        out = np.zeros(m)
        for i in range(m):
            vals = [abs(self.values[i, j]) for j in range(m) if j != i and self.valid[i, j]]
            if vals:
                out[i] = math.fsum(vals) / len(vals)
        return out

    def max_abs(self) -> np.ndarray:
        """Max |r| per feature over valid off-diagonal pairs (0 if none)."""
        m = self.n_features
        off = ~np.eye(m, dtype=bool)
        ok = self.valid & off
        vals = np.where(ok, np.abs(self.values), 0.0)
        return vals.max(axis=1) if m > 1 else np.zeros(m)


def average_ranks(x: np.ndarray) -> np.ndarray:
    """Ranks 1..n with ties assigned the average of their rank range."""
    order = np.argsort(x, kind="stable")
    ranks = np.empty(len(x), dtype=float)
    sorted_x = x[order]
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and sorted_x[j + 1] == sorted_x[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _pearson(a: np.ndarray, b: np.ndarray) -> float | None:
    a = a - a.mean()
    b = b - b.mean()
    denom = np.sqrt((a * a).sum() * (b * b).sum())
    if denom == 0.0:
        return None
    return float(np.clip((a * b).sum() / denom, -1.0, 1.0))


def correlation_matrix(data, method: str = "pearson", names=None) -> CorrelationMatrix:
    """Pairwise-complete correlation over numeric columns (or a dense matrix).

    `data` is a Dataset (numeric columns used) or an (n, m) array where NaN
    marks missing cells.
    """
    if method not in ("pearson", "spearman"):
        raise ConfigError(f"unknown correlation method {method!r}")
    if isinstance(data, Dataset):
        X, names = data.numeric_matrix(include=(NUMERIC,))
    else:
        X = np.asarray(data, dtype=float)
        names = list(names) if names is not None else [f"f{j}" for j in range(X.shape[1])]
    n, m = X.shape
    if m < 2:
        raise DataError("correlation matrix needs at least 2 numeric columns")
    present = ~np.isnan(X)
    values = np.zeros((m, m))
    valid = np.zeros((m, m), dtype=bool)
    for i in range(m):
        for j in range(i, m):
            both = present[:, i] & present[:, j]
            if both.sum() < 2:
                continue
            a, b = X[both, i], X[both, j]
            if method == "spearman":
                a, b = average_ranks(a), average_ranks(b)
            r = _pearson(a, b)
            if r is None:
                continue
            values[i, j] = values[j, i] = r
            valid[i, j] = valid[j, i] = True
    return CorrelationMatrix(method, list(names), values, valid)


def correlation_filter(matrix: CorrelationMatrix, threshold: float) -> tuple[list[str], list[str]]:
    """Greedy pruning of pairs with |r| > threshold; returns (kept, dropped)."""
    if not 0.0 < threshold <= 1.0:
        raise ConfigError("correlation threshold must be in (0, 1]")
    m = matrix.n_features
    mean_r = matrix.mean_abs()
    order = sorted(range(m), key=lambda i: (-mean_r[i], i))
    dropped: set[int] = set()
    for i in order:
        if i in dropped:
            continue
        for j in range(m):
            if j == i or j in dropped or not matrix.valid[i, j]:
                continue
            if abs(matrix.values[i, j]) <= threshold:
                continue
            # drop the member with higher mean |r|; tie drops the higher index
            loser = j if (mean_r[j], j) > (mean_r[i], i) else i
            dropped.add(loser)
            if loser == i:
                break
    kept = [matrix.names[i] for i in range(m) if i not in dropped]
    return kept, [matrix.names[i] for i in sorted(dropped)]


def cosine_similarity(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DataError("cosine_similarity: length mismatch")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise DataError("cosine_similarity: zero vector")
    return float(np.clip(a @ b / (na * nb), -1.0, 1.0))


def iou(a, b) -> float:
    """Intersection over union of two token sets; 0 when both are empty."""
    a, b = set(a), set(b)
    union = a | b
    if not union:
        return 0.0
    return len(a & b) / len(union)


def js_divergence(p, q) -> float:
    """Jensen-Shannon divergence in bits (0..1), with the 0*log0 = 0 convention."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DataError("js_divergence: support size mismatch")
    if np.any(p < 0) or np.any(q < 0):
        raise DataError("js_divergence: negative mass")
    if abs(p.sum() - 1.0) > 1e-9 or abs(q.sum() - 1.0) > 1e-9:
        raise DataError("js_divergence: distributions must sum to 1")
    m = 0.5 * (p + q)

    def kl(a, ref):
        mask = a > 0
        return float((a[mask] * np.log2(a[mask] / ref[mask])).sum())

    return min(max(0.5 * kl(p, m) + 0.5 * kl(q, m), 0.0), 1.0)
