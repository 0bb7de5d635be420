"""Model-aware and structural feature selectors.

The Lasso solver is cyclic coordinate descent on the squared-error objective

    (1/2n) ||y - X b||^2 + lambda ||b||_1

with X standardized to zero mean and unit population variance per column and
y centered, which makes every coordinate update a pure soft-threshold step.
Coefficients are reported in that standardized space; feature selection only
depends on their support. PCA and k-means follow the same determinism rules
as the rest of the package: fixed seeds give bit-identical results, and sign
or tie ambiguities are resolved canonically.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ballast.core.dataset import NUMERIC, Dataset
from ballast.core.signals import SignalTable
from ballast.errors import ConfigError, DataError
from ballast.stats import variance

log = logging.getLogger(__name__)


def variance_filter(dataset: Dataset, threshold: float = 0.01) -> list[str]:
    """Names of numeric features whose variance strictly exceeds the threshold."""
    kept = []
    for col in dataset.columns:
        if col.kind != NUMERIC:
            continue
        if variance(col) > threshold:
            kept.append(col.name)
    return kept


# ---------------------------------------------------------------------------
# Lasso


@dataclass(frozen=True, eq=False)
class LassoFit:
    coefficients: np.ndarray  # standardized space
    intercept: float
    lam: float
    iterations_used: int
    converged: bool
    objective_history: list[float] = field(default_factory=list, repr=False)
    column_means: np.ndarray = field(default=None, repr=False)
    column_scales: np.ndarray = field(default=None, repr=False)


def standardize_columns(X: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Zero-mean, unit-population-variance columns; constant columns stay zero."""
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    safe = np.where(scale > 0, scale, 1.0)
    return (X - mean) / safe, mean, scale


def lasso_lambda_max(X: np.ndarray, y: np.ndarray) -> float:
    """Smallest lambda at which the solution is exactly zero."""
    Xs, _, _ = standardize_columns(np.asarray(X, dtype=float))
    yc = np.asarray(y, dtype=float)
    yc = yc - yc.mean()
    n = len(yc)
    return float(np.max(np.abs(Xs.T @ yc)) / n) if n else 0.0


def lasso_lambda_grid(X: np.ndarray, y: np.ndarray, num: int = 20) -> np.ndarray:
    """Log-spaced regularization path from 1e-4 to 1 times lambda_max."""
    lam_max = lasso_lambda_max(X, y)
    return lam_max * np.logspace(-4, 0, num)


def lasso_fit(
    X,
    y,
    lam: float,
    max_sweeps: int = 1000,
    tol: float = 1e-6,
) -> LassoFit:
    """Cyclic coordinate descent; stops when the largest coefficient change
    in a full sweep drops below `tol`."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or len(y) != X.shape[0]:
        raise DataError("lasso_fit: X must be (n, m) with matching y")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise DataError("lasso_fit: non-finite inputs")
    if lam < 0:
        raise ConfigError("lambda must be >= 0")
    n, m = X.shape
    Xs, mean, scale = standardize_columns(X)
    y_mean = float(y.mean())
    yc = y - y_mean

    beta = np.zeros(m)
    resid = yc.copy()
    # with unit-variance columns, (1/n) x_j . x_j == 1 for every live column
    live = scale > 0
    history: list[float] = []
    converged = False
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        max_delta = 0.0
        for j in range(m):
            if not live[j]:
                continue
            xj = Xs[:, j]
            rho = (xj @ resid) / n + beta[j]
            new = np.sign(rho) * max(abs(rho) - lam, 0.0)
            delta = new - beta[j]
            if delta != 0.0:
                resid -= delta * xj
                beta[j] = new
                max_delta = max(max_delta, abs(delta))
        history.append(float(0.5 / n * (resid @ resid) + lam * np.abs(beta).sum()))
        if max_delta < tol:
            converged = True
            break
    return LassoFit(beta, y_mean, lam, sweeps, converged, history, mean, scale)


def lasso_select(X, y, lam: float, names=None) -> list:
    """Indices (or names) of features with nonzero Lasso coefficients."""
    fit = lasso_fit(X, y, lam)
    nz = np.flatnonzero(fit.coefficients != 0.0)
    return [names[j] for j in nz] if names is not None else nz.tolist()


# ---------------------------------------------------------------------------
# PCA


@dataclass(frozen=True, eq=False)
class PcaFit:
    components: np.ndarray  # k x m orthonormal rows
    explained_ratio: np.ndarray
    mean: np.ndarray

    def transform(self, X) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean) @ self.components.T

    def inverse_transform(self, Z) -> np.ndarray:
        return np.asarray(Z, dtype=float) @ self.components + self.mean


def pca_fit(X) -> PcaFit:
    """Full PCA of the sample covariance via SVD of the centered matrix.

    Component rows are sign-canonical: the largest-magnitude entry of each
    row is made positive, so repeated fits are comparable entry by entry.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DataError("pca_fit: need an (n, m) matrix with n >= 2")
    if not np.all(np.isfinite(X)):
        raise DataError("pca_fit: non-finite inputs")
    mean = X.mean(axis=0)
    _, svals, vt = np.linalg.svd(X - mean, full_matrices=False)
    var = svals**2
    total = var.sum()
    ratio = var / total if total > 0 else np.zeros_like(var)
    for row in vt:
        pivot = np.argmax(np.abs(row))
        if row[pivot] < 0:
            row *= -1.0
    return PcaFit(vt, ratio, mean)


def pca_select(fit: PcaFit, variance_frac: float) -> int:
    """Smallest component count whose cumulative explained ratio reaches the target."""
    if not 0.0 < variance_frac <= 1.0:
        raise ConfigError("variance_frac must be in (0, 1]")
    cum = np.cumsum(fit.explained_ratio)
    idx = np.searchsorted(cum, variance_frac - 1e-12)
    return int(min(idx + 1, len(cum)))


# ---------------------------------------------------------------------------
# k-means


@dataclass(frozen=True, eq=False)
class KMeansFit:
    assignments: np.ndarray
    centroids: np.ndarray
    inertia: float
    iterations_used: int
    inertia_history: list[float] = field(default_factory=list, repr=False)


def _squared_distances(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    d = (X * X).sum(axis=1)[:, None] - 2.0 * X @ C.T + (C * C).sum(axis=1)[None, :]
    return np.maximum(d, 0.0)


def kmeans(X, k: int, seed: int = 0, max_iter: int = 300, tol: float = 1e-6) -> KMeansFit:
    """Lloyd's algorithm with k-means++ seeding.

    Ties in assignment go to the lowest centroid index; a centroid losing all
    points is re-seeded on the point farthest from its current centroid. Both
    rules plus the seeded RNG make runs bit-reproducible.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if k < 1 or k > n:
        raise ConfigError(f"k must be in [1, {n}], got {k}")
    rng = np.random.default_rng(seed)

    centroids = np.empty((k, X.shape[1]))
    centroids[0] = X[int(rng.integers(n))]
    d2 = _squared_distances(X, centroids[:1]).ravel()
    for c in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            idx = int(rng.integers(n))
        centroids[c] = X[idx]
        d2 = np.minimum(d2, _squared_distances(X, centroids[c:c + 1]).ravel())

    history: list[float] = []
    assign = np.zeros(n, dtype=np.int64)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        d = _squared_distances(X, centroids)
        assign = d.argmin(axis=1)
        history.append(float(d[np.arange(n), assign].sum()))
        new_centroids = centroids.copy()
        for c in range(k):
            members = assign == c
            if members.any():
                new_centroids[c] = X[members].mean(axis=0)
            else:
                far = int(np.argmax(d[np.arange(n), assign]))
                new_centroids[c] = X[far]
        shift = float(np.max((new_centroids - centroids) ** 2))
        centroids = new_centroids
        if shift < tol:
            break
    d = _squared_distances(X, centroids)
    assign = d.argmin(axis=1)
    inertia = float(d[np.arange(n), assign].sum())
    history.append(inertia)
    return KMeansFit(assign, centroids, inertia, iterations, history)


# ---------------------------------------------------------------------------
# signal-table selectors


def _signal_map(table: SignalTable, signal: str) -> dict[str, float]:
    values = table.raw_values(signal)
    missing = [f for f in table.features if f not in values]
    if missing:
        raise DataError(f"signal {signal!r} missing for features {missing[:5]}")
    return values


def mi_retention_select(
    table: SignalTable,
    k: int | None = None,
    threshold: float | None = None,
    signal: str = "mi",
) -> list[str]:
    """Keep the top-k features by MI, or all with MI >= threshold.

    Stands in for information-bottleneck selection: retention is ranked purely
    by the mutual-information signal. Ties keep the earlier feature.
    """
    if (k is None) == (threshold is None):
        raise ConfigError("provide exactly one of k / threshold")
    values = _signal_map(table, signal)
    features = table.features
    if k is not None:
        if k < 0:
            raise ConfigError("k must be >= 0")
        order = sorted(range(len(features)), key=lambda i: (-values[features[i]], i))
        kept_idx = sorted(order[:k])
        return [features[i] for i in kept_idx]
    return [f for f in features if values[f] >= threshold]


def external_importance_select(table: SignalTable, signal: str, threshold: float) -> list[str]:
    """Keep features whose ingested signal (e.g. mean |SHAP|) is >= threshold."""
    values = _signal_map(table, signal)
    kept = [f for f in table.features if values[f] >= threshold]
    if not kept:
        log.warning("external_importance_select: no feature reaches %s >= %g", signal, threshold)
    return kept
