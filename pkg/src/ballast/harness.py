"""Before/after evaluation harness.

The reference model is deliberately small: L2 logistic regression trained by
plain gradient descent on standardized features (closed-form least squares
for real targets). It exists to compare a dataset against its pruned version
under identical splits, not to chase absolute benchmark numbers, so fits are
deterministic: a (dataset, seed) pair always yields bit-identical metrics.

Missing cells are filled with the training split's column mean (0 after
standardization); categorical columns enter as their integer codes.
"""

from __future__ import annotations

import csv
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from ballast.core.dataset import CATEGORICAL, NUMERIC, Dataset
from ballast.core.sparse import StorageBytes, storage_bytes
from ballast.errors import DataError, EmptyResultError
from ballast.score import ScoreConfig, dataset_ballast_index, prune
from ballast.stats import sparsity

log = logging.getLogger(__name__)

L2_PENALTY = 1e-3
GD_ITERATIONS = 500
GD_GRAD_TOL = 1e-5


@dataclass(frozen=True)
class Metrics:
    auc: float | None = None
    f1: float | None = None
    accuracy: float | None = None
    recall: float | None = None
    precision: float | None = None
    mse: float | None = None
    r2: float | None = None


def compute_auc(scores, labels) -> float:
    """Rank-based (Mann-Whitney) ROC-AUC with average-rank tie handling."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DataError("compute_auc needs both classes present")
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(len(scores), dtype=float)
    sorted_scores = scores[order]
    i = 0
    while i < len(scores):
        j = i
        while j + 1 < len(scores) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    rank_sum = ranks[pos].sum()
    return float((rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def split_indices(n: int, seed: int, frac: float = 0.8) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic shuffled train/test indices (shared across full and pruned runs)."""
    perm = np.random.default_rng(seed).permutation(n)
    cut = int(n * frac)
    return perm[:cut], perm[cut:]


def design_matrix(dataset: Dataset) -> np.ndarray:
    """Dense model view: numeric values and categorical codes, NaN for missing."""
    X, names = dataset.numeric_matrix(include=(NUMERIC, CATEGORICAL))
    if not names:
        raise DataError("no numeric or categorical features to train on")
    return X


def _prepare(X_train: np.ndarray, X_test: np.ndarray):
    mean = np.nanmean(X_train, axis=0)
    mean = np.nan_to_num(mean, nan=0.0)
    filled_train = np.where(np.isnan(X_train), mean, X_train)
    filled_test = np.where(np.isnan(X_test), mean, X_test)
    scale = filled_train.std(axis=0)
    safe = np.where(scale > 0, scale, 1.0)
    return (filled_train - mean) / safe, (filled_test - mean) / safe


def _spectral_bound(X: np.ndarray) -> float:
    """Largest eigenvalue of (1/n) X^T X via deterministic power iteration."""
    n, m = X.shape
    v = np.ones(m) / np.sqrt(m)
    lam = 1.0
    for _ in range(50):
        w = X.T @ (X @ v) / n
        norm = np.linalg.norm(w)
        if norm == 0:
            return 1.0
        lam, v = norm, w / norm
    return float(lam)


def _fit_binary_logistic(X: np.ndarray, y01: np.ndarray) -> np.ndarray:
    """Gradient descent on the mean log-loss + (lam/2)||w||^2 (intercept unpenalized)."""
    n, m = X.shape
    Xb = np.hstack([X, np.ones((n, 1))])
    w = np.zeros(m + 1)
    lam = L2_PENALTY
    step = 1.0 / (0.25 * _spectral_bound(Xb) + lam)
    for _ in range(GD_ITERATIONS):
        z = Xb @ w
        p = 1.0 / (1.0 + np.exp(-z))
        grad = Xb.T @ (p - y01) / n
        grad[:m] += lam * w[:m]
        if np.linalg.norm(grad) < GD_GRAD_TOL:
            break
        w -= step * grad
    return w


def _predict_proba(X: np.ndarray, w: np.ndarray) -> np.ndarray:
    Xb = np.hstack([X, np.ones((len(X), 1))])
    return 1.0 / (1.0 + np.exp(-(Xb @ w)))


def _binary_metrics(prob: np.ndarray, y: np.ndarray) -> Metrics:
    pred = (prob >= 0.5).astype(int)
    tp = int(((pred == 1) & (y == 1)).sum())
    fp = int(((pred == 1) & (y == 0)).sum())
    fn = int(((pred == 0) & (y == 1)).sum())
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return Metrics(
        auc=compute_auc(prob, y),
        f1=f1,
        accuracy=float((pred == y).mean()),
        recall=recall,
        precision=precision,
    )


def train_eval(dataset: Dataset, split_seed: int = 0, split_frac: float = 0.8) -> tuple[Metrics, float]:
    """Train on the seeded split, evaluate on the held-out rows.

    Returns (metrics, train_seconds). The same seed always reproduces the
    same split indices, so full and pruned datasets are scored on identical
    rows.
    """
    if dataset.target is None:
        raise DataError("dataset has no target")
    X = design_matrix(dataset)
    y = np.asarray(dataset.target.values)
    train_idx, test_idx = split_indices(dataset.n_rows, split_seed, split_frac)
    Xtr, Xte = _prepare(X[train_idx], X[test_idx])

    if dataset.target.kind == "real":
        ytr, yte = y[train_idx].astype(float), y[test_idx].astype(float)
        start = time.perf_counter()
        Xb = np.hstack([Xtr, np.ones((len(Xtr), 1))])
        w, *_ = np.linalg.lstsq(Xb, ytr, rcond=None)
        elapsed = time.perf_counter() - start
        pred = np.hstack([Xte, np.ones((len(Xte), 1))]) @ w
        mse = float(((pred - yte) ** 2).mean())
        ss_tot = float(((yte - yte.mean()) ** 2).sum())
        r2 = 1.0 - float(((pred - yte) ** 2).sum()) / ss_tot if ss_tot > 0 else 0.0
        return Metrics(mse=mse, r2=r2), elapsed

    ytr, yte = y[train_idx].astype(int), y[test_idx].astype(int)
    classes = np.unique(y.astype(int))
    for half, name in ((ytr, "train"), (yte, "test")):
        if np.unique(half).size < 2:
            raise DataError(f"single-class {name} split; try another split seed")

    start = time.perf_counter()
    if len(classes) == 2:
        w = _fit_binary_logistic(Xtr, (ytr == 1).astype(float))
        elapsed = time.perf_counter() - start
        return _binary_metrics(_predict_proba(Xte, w), (yte == 1).astype(int)), elapsed

    # one-vs-rest for multiclass
    weights = {c: _fit_binary_logistic(Xtr, (ytr == c).astype(float)) for c in classes}
    elapsed = time.perf_counter() - start
    probs = np.column_stack([_predict_proba(Xte, weights[c]) for c in classes])
    pred = classes[probs.argmax(axis=1)]
    per_class = []
    aucs = []
    for i, c in enumerate(classes):
        yc = (yte == c).astype(int)
        pc = (pred == c).astype(int)
        tp = int(((pc == 1) & (yc == 1)).sum())
        fp = int(((pc == 1) & (yc == 0)).sum())
        fn = int(((pc == 0) & (yc == 1)).sum())
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        per_class.append((prec, rec, f1))
        if 0 < yc.sum() < len(yc):
            aucs.append(compute_auc(probs[:, i], yc))
    prec, rec, f1 = (float(np.mean([pc[i] for pc in per_class])) for i in range(3))
    return (
        Metrics(
            auc=float(np.mean(aucs)) if aucs else None,
            f1=f1,
            accuracy=float((pred == yte).mean()),
            recall=rec,
            precision=prec,
        ),
        elapsed,
    )


@dataclass(frozen=True)
class TradeoffRow:
    tau: float
    features_kept: int
    ballast_index: float
    metrics: Metrics | None
    train_seconds: float | None
    skipped_reason: str | None = None


CSV_HEADER = "tau,features_kept,ballast_index,auc,f1,accuracy,recall,precision,train_seconds"


@dataclass(frozen=True)
class TradeoffCurve:
    rows: list[TradeoffRow]

    def to_csv(self, path, include_timings: bool = False) -> None:
        """Write the curve; timings are opt-in so reruns stay byte-identical."""
        def fmt(v):
            return "" if v is None else format(v, ".9g")

        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER.split(","))
            for r in self.rows:
                m = r.metrics or Metrics()
                writer.writerow(
                    [
                        fmt(r.tau),
                        r.features_kept,
                        fmt(r.ballast_index),
                        fmt(m.auc),
                        fmt(m.f1),
                        fmt(m.accuracy),
                        fmt(m.recall),
                        fmt(m.precision),
                        fmt(r.train_seconds) if include_timings else "",
                    ]
                )


def sweep(
    dataset: Dataset,
    config: ScoreConfig,
    taus,
    scores: dict[str, float],
    split_seed: int = 0,
    split_frac: float = 0.8,
) -> TradeoffCurve:
    """Prune at each threshold and re-evaluate on the shared split.

    `scores` maps every feature to its ballast score (thresholds only move
    the cut, so scores are computed once by the caller). Thresholds yielding
    an empty feature set are recorded as skipped rows.
    """
    rows = []
    for tau in sorted(taus):
        index = dataset_ballast_index({n: scores[n] for n in dataset.feature_names}, tau)
        try:
            reduced = prune(dataset, scores, tau)
        except EmptyResultError as exc:
            log.warning("tau=%g skipped: %s", tau, exc)
            rows.append(TradeoffRow(float(tau), 0, index, None, None, str(exc)))
            continue
        metrics, elapsed = train_eval(reduced, split_seed, split_frac)
        rows.append(TradeoffRow(float(tau), reduced.n_features, index, metrics, elapsed))
    return TradeoffCurve(rows)


@dataclass(frozen=True)
class StorageReport:
    bytes: StorageBytes
    n_rows: int
    n_numeric_features: int
    column_sparsity: dict[str, float]

    @property
    def negative_savings(self) -> bool:
        return self.bytes.savings_percent < 0


def storage_report(dataset: Dataset) -> StorageReport:
    """Dense-vs-CSR byte accounting for the numeric view plus per-column sparsity."""
    X, names = dataset.numeric_matrix(include=(NUMERIC,))
    if not names:
        raise DataError("no numeric columns for storage accounting")
    report = StorageReport(
        bytes=storage_bytes(X),
        n_rows=dataset.n_rows,
        n_numeric_features=len(names),
        column_sparsity={c.name: sparsity(c) for c in dataset.columns},
    )
    if report.negative_savings:
        log.warning(
            "CSR is larger than dense for this matrix (savings %.2f%%)",
            report.bytes.savings_percent,
        )
    return report
