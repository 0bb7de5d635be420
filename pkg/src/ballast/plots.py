"""Figure rendering for the report paths.

Every CLI command that writes a delimited report can also render the
matching matplotlib figures next to it. Rendering is deterministic: the Agg
backend, fixed figure geometry, and no timestamps, so rerunning a command
reproduces the PNG bytes exactly.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DPI = 110


def _save(fig, path) -> str:
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return str(path)


def plot_entropy_histogram(profiles, threshold: float, path) -> str:
    """Distribution of per-feature normalized entropy with the flag threshold."""
    values = [p.norm_entropy for p in profiles]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.hist(values, bins=30, color="#4878d0", edgecolor="white")
    ax.axvline(threshold, color="#d65f5f", linestyle="--", label=f"threshold = {threshold:g}")
    ax.set_xlabel("normalized entropy")
    ax.set_ylabel("features")
    ax.set_title("Feature entropy distribution")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def plot_mi_bars(profiles, threshold: float, path) -> str:
    """Per-feature MI, sorted, with the low-information threshold."""
    pairs = [(p.name, p.mi_bits) for p in profiles if p.mi_bits is not None]
    pairs.sort(key=lambda kv: kv[1])
    names = [k for k, _ in pairs]
    values = [v for _, v in pairs]
    fig, ax = plt.subplots(figsize=(7, max(3.0, 0.18 * len(names) + 1.2)))
    ax.barh(range(len(names)), values, color="#4878d0")
    ax.axvline(threshold, color="#d65f5f", linestyle="--", label=f"threshold = {threshold:g}")
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names, fontsize=6)
    ax.set_xlabel("mutual information (bits)")
    ax.set_title("Feature MI against the target")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def plot_score_scatter(table, scores: dict, tau: float, path) -> str:
    """Normalized MI vs normalized entropy, colored by keep/drop at tau."""
    h = table.normalized_values("entropy")
    try:
        mi = table.normalized_values("mi")
    except Exception:
        mi = {k: 0.0 for k in h}
    names = list(h)
    xs = np.array([h[n] for n in names])
    ys = np.array([mi.get(n, 0.0) for n in names])
    dropped = np.array([scores[n] > tau for n in names])
    fig, ax = plt.subplots(figsize=(6, 5))
    ax.scatter(xs[~dropped], ys[~dropped], s=22, c="#4878d0", label="keep")
    if dropped.any():
        ax.scatter(xs[dropped], ys[dropped], s=22, c="#d65f5f", label="drop")
    ax.set_xlabel("normalized entropy")
    ax.set_ylabel("normalized MI")
    ax.set_title(f"Keep/drop at tau = {tau:g}")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def plot_score_distribution(scores: dict, tau: float, path) -> str:
    """Ballast-score box plots for kept vs dropped features."""
    kept = [v for v in scores.values() if v <= tau]
    dropped = [v for v in scores.values() if v > tau]
    groups, labels = [], []
    for vals, lab in ((kept, "kept"), (dropped, "dropped")):
        if vals:
            groups.append(vals)
            labels.append(f"{lab} (n={len(vals)})")
    fig, ax = plt.subplots(figsize=(5, 4.5))
    ax.boxplot(groups, tick_labels=labels)
    ax.axhline(tau, color="#d65f5f", linestyle="--", label=f"tau = {tau:g}")
    ax.set_ylabel("ballast score")
    ax.set_title("Score separation")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def plot_tradeoff(curve, n_features: int, path) -> str:
    """Metrics vs percentage of features dropped."""
    rows = [r for r in curve.rows if r.metrics is not None]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    dropped_pct = [100.0 * (1.0 - r.features_kept / n_features) for r in rows]
    for attr, color in (("auc", "#4878d0"), ("f1", "#6acc64"), ("accuracy", "#956cb4")):
        vals = [getattr(r.metrics, attr) for r in rows]
        if any(v is not None for v in vals):
            ax.plot(dropped_pct, vals, marker="o", label=attr.upper(), color=color)
    ax.set_xlabel("features dropped (%)")
    ax.set_ylabel("held-out metric")
    ax.set_title("Pruning trade-off")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def plot_storage(report, path) -> str:
    """Dense vs CSR byte footprint."""
    fig, ax = plt.subplots(figsize=(5, 4.5))
    sizes = [report.bytes.dense_bytes, report.bytes.csr_bytes]
    ax.bar(["dense", "CSR"], sizes, color=["#4878d0", "#6acc64"])
    for i, v in enumerate(sizes):
        ax.text(i, v, f"{v:,}", ha="center", va="bottom", fontsize=9)
    ax.set_ylabel("bytes")
    ax.set_title(f"Storage: {report.bytes.savings_percent:.2f}% saved by CSR")
    fig.tight_layout()
    return _save(fig, path)


def plot_sentence_signals(signals, path) -> str:
    """Histograms of the four sentence signals with their flag thresholds."""
    t = signals.thresholds
    fig, axes = plt.subplots(2, 2, figsize=(9, 7))
    panels = [
        (signals.tfidf_sum, f"TF-IDF sum (decile {t.tfidf_decile:g})", None),
        (signals.entropy_bits, "entropy (bits)", t.entropy_max),
        (signals.max_cosine, "max cosine", t.cosine_min),
        (signals.topic_js, f"topic JS (decile {t.js_decile:g})", None),
    ]
    for ax, (values, label, cut) in zip(axes.ravel(), panels):
        values = np.asarray(values, dtype=float)
        values = values[~np.isnan(values)]
        if values.size:
            ax.hist(values, bins=30, color="#4878d0", edgecolor="white")
        if cut is not None:
            ax.axvline(cut, color="#d65f5f", linestyle="--")
        ax.set_xlabel(label)
        ax.set_ylabel("sentences")
    fig.suptitle("Sentence ballast signals")
    fig.tight_layout()
    return _save(fig, path)
