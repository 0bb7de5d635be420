"""Detection pipelines: feature profiling -> signals -> scores -> drop set.

This is the composition layer behind the CLI. A detection run:

1. profiles every feature (entropy, normalized entropy, variance, sparsity,
   MI when a target is present);
2. assembles a signal table from those profiles plus any ingested external
   signals, and min-max normalizes it;
3. scores features with either the product form (entropy x MI) or the
   weighted form over configured signals;
4. unions three drop mechanisms, each recorded as a reason per feature:
   the conjunctive near-constant candidate rule, greedy correlation pruning,
   and the score threshold.

Without a target the MI clause of the candidate rule is vacuous and the
product score degrades to the entropy deficit alone; both fallbacks are
logged.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from ballast.core.dataset import NUMERIC, Dataset
from ballast.core.signals import REDUNDANCY, UTILITY, SignalTable
from ballast.errors import ConfigError
from ballast.redundancy import correlation_filter, correlation_matrix
from ballast.score import (
    BallastReport,
    ScoreConfig,
    build_report,
    candidate_rule,
    normalize_signals,
    product_ballast_score,
    score_table,
)
from ballast.select import mi_retention_select, variance_filter
from ballast.stats import FeatureProfile, profile_dataset

log = logging.getLogger(__name__)

SELECTOR_NAMES = ("variance", "mi_top_k", "mi_threshold", "external")


@dataclass(frozen=True)
class DetectionConfig:
    mode: str = "product"  # "product" | "weighted"
    score: ScoreConfig = field(default_factory=ScoreConfig)
    use_candidate_rule: bool = True
    correlation_threshold: float | None = 0.95
    correlation_method: str = "pearson"
    bins: int = 16
    selectors: tuple = ()  # (name, params-dict) pairs

    def __post_init__(self):
        if self.mode not in ("product", "weighted"):
            raise ConfigError(f"unknown score mode {self.mode!r}")
        for name, _ in self.selectors:
            if name not in SELECTOR_NAMES:
                raise ConfigError(f"unknown selector {name!r}; known: {SELECTOR_NAMES}")


@dataclass(frozen=True, eq=False)
class Detection:
    profiles: list[FeatureProfile]
    signal_table: SignalTable
    scores: dict[str, float]
    candidates: list[str]
    correlation_dropped: list[str]
    selector_dropped: dict[str, list[str]]
    report: BallastReport


def signals_from_profiles(profiles: list[FeatureProfile]) -> SignalTable:
    """Utility signals out of feature profiles (MI only when present)."""
    table = SignalTable()
    have_mi = all(p.mi_bits is not None for p in profiles)
    for p in profiles:
        table.add(p.name, "entropy", UTILITY, p.norm_entropy)
        if have_mi:
            table.add(p.name, "mi", UTILITY, p.mi_bits)
        if p.variance is not None:
            table.add(p.name, "variance", UTILITY, p.variance)
    return table


def build_signal_table(
    dataset: Dataset,
    bins: int = 16,
    external: SignalTable | None = None,
    correlation_method: str = "pearson",
) -> tuple[SignalTable, list[FeatureProfile]]:
    """Computed utility signals, a correlation redundancy signal, and any
    ingested externals, merged and min-max normalized."""
    profiles = profile_dataset(dataset, bins=bins)
    table = signals_from_profiles(profiles)
    numeric = [c.name for c in dataset.columns if c.kind == NUMERIC]
    if len(numeric) >= 2:
        cm = correlation_matrix(dataset, method=correlation_method)
        for name, value in zip(cm.names, cm.max_abs()):
            table.add(name, "max_abs_corr", REDUNDANCY, float(value))
    if external is not None:
        table = table.merged_with(external)
    return normalize_signals(table), profiles


def product_scores(profiles: list[FeatureProfile], table: SignalTable) -> dict[str, float]:
    """Product-form score: entropy deficit times MI deficit.

    Uses each feature's own normalized entropy (already in [0, 1]) and the
    min-max normalized MI across features.
    """
    names = [p.name for p in profiles]
    h = np.array([p.norm_entropy for p in profiles])
    if all(p.mi_bits is not None for p in profiles):
        mi_norm = table.normalized_values("mi")
        mi = np.array([mi_norm[n] for n in names])
    else:
        log.info("no target: product score reduces to the entropy deficit")
        mi = np.zeros(len(names))
    values = product_ballast_score(h, mi)
    return dict(zip(names, values.tolist()))


def _apply_selectors(dataset: Dataset, detection_cfg: DetectionConfig, table: SignalTable):
    dropped: dict[str, list[str]] = {}
    for name, params in detection_cfg.selectors:
        params = dict(params)
        if name == "variance":
            kept = set(variance_filter(dataset, params.get("threshold", 0.01)))
            gone = [c.name for c in dataset.columns if c.kind == NUMERIC and c.name not in kept]
        elif name == "mi_top_k":
            kept = set(mi_retention_select(table, k=int(params["k"])))
            gone = [f for f in table.features if f not in kept]
        elif name == "mi_threshold":
            kept = set(mi_retention_select(table, threshold=float(params["threshold"])))
            gone = [f for f in table.features if f not in kept]
        elif name == "external":
            from ballast.select import external_importance_select

            kept = set(
                external_importance_select(table, params["signal"], float(params["threshold"]))
            )
            gone = [f for f in table.features if f not in kept]
        else:  # unreachable: DetectionConfig validates names
            raise ConfigError(f"unknown selector {name!r}")
        dropped[name] = gone
    return dropped


def detect(
    dataset: Dataset,
    config: DetectionConfig | None = None,
    external: SignalTable | None = None,
) -> Detection:
    """Run the full detection pipeline and assemble a report."""
    cfg = config or DetectionConfig()
    table, profiles = build_signal_table(
        dataset, bins=cfg.bins, external=external, correlation_method=cfg.correlation_method
    )

    if cfg.mode == "product":
        scores = product_scores(profiles, table)
    else:
        scores = score_table(table, cfg.score)

    extra: dict[str, list[str]] = {}
    candidates: list[str] = []
    if cfg.use_candidate_rule:
        have_mi = all(p.mi_bits is not None for p in profiles)
        if not have_mi:
            log.info("no target: candidate rule drops its MI clause")
        for p in profiles:
            mi = p.mi_bits if have_mi else 0.0
            var = p.variance if p.variance is not None else float("inf")
            if candidate_rule(mi, p.norm_entropy, var, cfg.score):
                candidates.append(p.name)
                extra.setdefault(p.name, []).append("candidate_rule")

    corr_dropped: list[str] = []
    numeric = [c.name for c in dataset.columns if c.kind == NUMERIC]
    if cfg.correlation_threshold is not None and len(numeric) >= 2:
        cm = correlation_matrix(dataset, method=cfg.correlation_method)
        _, corr_dropped = correlation_filter(cm, cfg.correlation_threshold)
        for name in corr_dropped:
            extra.setdefault(name, []).append(
                f"correlation>{cfg.correlation_threshold:g}"
            )

    selector_dropped = _apply_selectors(dataset, cfg, table)
    for sel, gone in selector_dropped.items():
        for name in gone:
            extra.setdefault(name, []).append(f"selector:{sel}")

    snapshot = {
        "mode": cfg.mode,
        "tau": cfg.score.tau,
        "mi_max": cfg.score.mi_max,
        "h_max": cfg.score.h_max,
        "var_max": cfg.score.var_max,
        "quorum": cfg.score.quorum,
        "utility_weights": dict(cfg.score.utility_weights),
        "redundancy_weights": dict(cfg.score.redundancy_weights),
        "use_candidate_rule": cfg.use_candidate_rule,
        "correlation_threshold": cfg.correlation_threshold,
        "correlation_method": cfg.correlation_method,
        "bins": cfg.bins,
        "selectors": [[n, dict(p)] for n, p in cfg.selectors],
    }
    report = build_report(dataset.feature_names, scores, cfg.score.tau, snapshot, extra)
    return Detection(profiles, table, scores, candidates, corr_dropped, selector_dropped, report)


def with_tau(cfg: DetectionConfig, tau: float) -> DetectionConfig:
    return replace(cfg, score=replace(cfg.score, tau=tau))
