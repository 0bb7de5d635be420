"""TextRank sentence scoring.

Power iteration over the row-stochastic cosine-similarity graph with damping.
Rows with no surviving edges (isolated sentences, or all similarities below
the floor) distribute their mass uniformly, so every sentence keeps at least
the teleport share and the scores always form a probability vector.
"""

from __future__ import annotations

import numpy as np

from ballast.errors import ConfigError, DataError


def _as_vectors(sentences) -> np.ndarray:
    if isinstance(sentences, np.ndarray):
        return np.asarray(sentences, dtype=float)
    # token lists -> count vectors over the union vocabulary
    vocab: dict[str, int] = {}
    rows = []
    for toks in sentences:
        counts: dict[int, float] = {}
        for t in toks:
            j = vocab.setdefault(t, len(vocab))
            counts[j] = counts.get(j, 0.0) + 1.0
        rows.append(counts)
    X = np.zeros((len(rows), max(len(vocab), 1)))
    for i, counts in enumerate(rows):
        for j, v in counts.items():
            X[i, j] = v
    return X


def cosine_matrix(vectors: np.ndarray) -> np.ndarray:
    """Pairwise cosine similarities; zero rows yield zero similarity."""
    norms = np.linalg.norm(vectors, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = vectors / safe[:, None]
    sim = np.clip(unit @ unit.T, -1.0, 1.0)
    sim[norms == 0, :] = 0.0
    sim[:, norms == 0] = 0.0
    return sim


def textrank(
    sentences,
    sim_floor: float = 0.0,
    damping: float = 0.85,
    tol: float = 1e-6,
    max_iter: int = 200,
) -> np.ndarray:
    """Per-sentence importance scores summing to 1.

    `sentences` is either an (n, d) array of sentence vectors or an iterable
    of token lists. Edges with similarity below `sim_floor` are dropped.
    """
    if not 0.0 <= damping < 1.0:
        raise ConfigError("damping must be in [0, 1)")
    X = _as_vectors(sentences)
    n = X.shape[0]
    if n == 0:
        raise DataError("textrank needs at least one sentence")
    if n == 1:
        return np.ones(1)
    W = cosine_matrix(X)
    np.fill_diagonal(W, 0.0)
    W[W < sim_floor] = 0.0
    row_sums = W.sum(axis=1)
    dangling = row_sums == 0
    P = np.divide(W, row_sums[:, None], out=np.zeros_like(W), where=row_sums[:, None] > 0)

    scores = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    for _ in range(max_iter):
        dangling_mass = scores[dangling].sum() / n
        new = teleport + damping * (P.T @ scores + dangling_mass)
        if np.abs(new - scores).sum() < tol:
            scores = new
            break
        scores = new
    return scores / scores.sum()
