"""Ballast scoring: signal normalization, score aggregation, pruning.

Two score forms are provided. The product form flags a feature only when
both of its inputs are low:

    score = (1 - norm_entropy) * (1 - norm_mi)

The weighted form sums utility deficits and redundancy indicators:

    score = sum_k w_k * (1 - U_k) + sum_r lambda_r * R_r

Weights must sum to one so scores stay in [0, 1]; that normalization is this
package's convention, declared at config construction. All thresholds are
strict inequalities: a feature is ballast when score > tau, kept when
score <= tau, so the kept fraction and the ballast index always add to 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ballast.core.dataset import Dataset
from ballast.core.signals import SignalTable
from ballast.errors import ConfigError, DataError, EmptyResultError

WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class ScoreConfig:
    utility_weights: dict[str, float] = field(default_factory=dict)
    redundancy_weights: dict[str, float] = field(default_factory=dict)
    tau: float = 0.5
    mi_max: float = 0.01
    h_max: float = 0.1
    var_max: float = 0.05
    quorum: int = 2

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ConfigError(f"tau must be in [0, 1], got {self.tau}")
        if self.quorum < 1:
            raise ConfigError("quorum must be >= 1")
        weights = list(self.utility_weights.values()) + list(self.redundancy_weights.values())
        if any(w < 0 for w in weights):
            raise ConfigError("weights must be nonnegative")
        if weights and abs(sum(weights) - 1.0) > WEIGHT_TOL:
            raise ConfigError(f"weights must sum to 1, got {sum(weights)}")

    @classmethod
    def with_normalized_weights(cls, utility_weights, redundancy_weights=None, **kwargs):
        """Rescale the given weights to sum to one, then construct."""
        redundancy_weights = redundancy_weights or {}
        total = sum(utility_weights.values()) + sum(redundancy_weights.values())
        if total <= 0:
            raise ConfigError("at least one positive weight required")
        return cls(
            {k: v / total for k, v in utility_weights.items()},
            {k: v / total for k, v in redundancy_weights.items()},
            **kwargs,
        )


def normalize_signals(table: SignalTable) -> SignalTable:
    """Min-max normalize each signal across features.

    A degenerate signal (all features equal) maps to 0.5 everywhere, so a
    uniform signal neither mass-flags nor mass-exempts.
    """
    normalized: dict[tuple[str, str], float] = {}
    for signal in table.signals:
        values = table.raw_values(signal)
        lo, hi = min(values.values()), max(values.values())
        for feat, v in values.items():
            normalized[(feat, signal)] = 0.5 if hi == lo else (v - lo) / (hi - lo)
    return table.with_normalized(normalized)


def _check_unit(name: str, values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if np.any(values < 0) or np.any(values > 1):
        raise ConfigError(f"{name} values must lie in [0, 1]")
    return values


def product_ballast_score(norm_entropy, norm_mi):
    """(1 - norm_entropy) * (1 - norm_mi); high only when both inputs are low."""
    h = _check_unit("norm_entropy", norm_entropy)
    mi = _check_unit("norm_mi", norm_mi)
    return (1.0 - h) * (1.0 - mi)


def weighted_ballast_score(utilities, redundancies, config: ScoreConfig) -> float:
    """Weighted sum of utility deficits and redundancy indicators."""
    u = _check_unit("utility", utilities)
    r = _check_unit("redundancy", redundancies)
    w = np.array(list(config.utility_weights.values()))
    lam = np.array(list(config.redundancy_weights.values()))
    if len(u) != len(w) or len(r) != len(lam):
        raise ConfigError(
            f"signal/weight length mismatch: {len(u)} utilities vs {len(w)} weights, "
            f"{len(r)} redundancies vs {len(lam)} weights"
        )
    return float((w * (1.0 - u)).sum() + (lam * r).sum())


def score_table(table: SignalTable, config: ScoreConfig) -> dict[str, float]:
    """Weighted score per feature from a normalized signal table."""
    scores = {}
    for feat in table.features:
        u = [table.get(feat, s).normalized for s in config.utility_weights]
        r = [table.get(feat, s).normalized for s in config.redundancy_weights]
        if any(v is None for v in u + r):
            raise DataError("signal table is not normalized; call normalize_signals first")
        scores[feat] = weighted_ballast_score(u, r, config)
    return scores


def dataset_ballast_index(scores, tau: float) -> float:
    """Fraction of features whose score strictly exceeds tau."""
    scores = np.asarray(list(scores.values()) if isinstance(scores, dict) else scores, dtype=float)
    if scores.size == 0:
        raise DataError("empty score list")
    return float((scores > tau).mean())


def prune(dataset: Dataset, scores: dict[str, float], tau: float) -> Dataset:
    """Retain exactly the features scoring <= tau, preserving column order."""
    missing = [c.name for c in dataset.columns if c.name not in scores]
    if missing:
        raise DataError(f"missing scores for features {missing[:5]}")
    kept = [c.name for c in dataset.columns if scores[c.name] <= tau]
    if not kept:
        raise EmptyResultError("pruning removed every feature; raise tau")
    return dataset.select(kept)


def candidate_rule(mi, h_norm, var, config: ScoreConfig | None = None):
    """Conjunctive near-constant test: MI, normalized entropy, and variance all
    strictly below their thresholds."""
    cfg = config or ScoreConfig()
    mi = np.asarray(mi, dtype=float)
    h = np.asarray(h_norm, dtype=float)
    v = np.asarray(var, dtype=float)
    out = (mi < cfg.mi_max) & (h < cfg.h_max) & (v < cfg.var_max)
    return bool(out) if out.ndim == 0 else out


def vote_ballast(flags, quorum: int = 2):
    """True when at least `quorum` of the flags fire.

    Accepts one flag vector (returns bool) or an (n, q) matrix (returns a
    bool array, one vote per row).
    """
    if quorum < 1:
        raise ConfigError("quorum must be >= 1")
    flags = np.asarray(flags, dtype=bool)
    if flags.ndim == 1:
        return bool(flags.sum() >= quorum)
    return flags.sum(axis=1) >= quorum


@dataclass(frozen=True)
class BallastReport:
    feature_names: list[str]
    scores: dict[str, float]
    tau: float
    ballast_index: float
    kept: list[str]
    dropped: list[str]
    config: dict
    reasons: dict[str, list[str]] = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "tau": self.tau,
            "ballast_index": self.ballast_index,
            "n_features": len(self.feature_names),
            "n_kept": len(self.kept),
            "n_dropped": len(self.dropped),
            "scores": {k: self.scores[k] for k in self.feature_names},
            "kept": self.kept,
            "dropped": self.dropped,
            "reasons": self.reasons,
            "config": self.config,
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def build_report(
    dataset_names,
    scores: dict[str, float],
    tau: float,
    config_snapshot: dict,
    extra_dropped: dict[str, list[str]] | None = None,
) -> BallastReport:
    """Assemble a report; `extra_dropped` adds reasoned drops beyond the score rule."""
    names = list(dataset_names)
    reasons: dict[str, list[str]] = {}
    for name in names:
        r = []
        if scores[name] > tau:
            r.append(f"score>{tau:g}")
        r.extend((extra_dropped or {}).get(name, []))
        if r:
            reasons[name] = r
    dropped = [n for n in names if n in reasons]
    kept = [n for n in names if n not in reasons]
    index = dataset_ballast_index({n: scores[n] for n in names}, tau)
    return BallastReport(names, scores, tau, index, kept, dropped, config_snapshot, reasons)
