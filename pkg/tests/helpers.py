"""Shared synthetic generators and brute-force oracles.

Oracles here are deliberately written as plain Python loops so they share no
code path with the package's vectorized implementations.
"""

from __future__ import annotations

import math

import numpy as np

from ballast.core.dataset import Dataset, Target, numeric_column
from ballast.text.corpus import corpus_from_tokens

PLANTED_SEED = 613


def make_planted_dataset(seed: int = PLANTED_SEED, n: int = 2000):
    """50 features: 20 informative + 10 duplicates + 10 constants + 10 spike noise.

    Informative features shift with a binary target (coefficients 0.5..1.2);
    duplicates copy the first ten informative columns; constants are flat;
    noise columns are zero except for 1% random spikes, independent of the
    target (near-constant junk).
    """
    rng = np.random.default_rng(seed)
    y = rng.integers(0, 2, n)
    cols = []
    truth = {"informative": [], "duplicates": [], "constants": [], "noise": []}
    coefs = np.linspace(0.5, 1.2, 20)
    for j, c in enumerate(coefs):
        name = f"inf{j:02d}"
        cols.append(numeric_column(name, c * y + rng.normal(size=n)))
        truth["informative"].append(name)
    for j in range(10):
        name = f"dup{j:02d}"
        cols.append(numeric_column(name, cols[j].values.copy()))
        truth["duplicates"].append(name)
    for j in range(10):
        name = f"const{j:02d}"
        cols.append(numeric_column(name, np.full(n, float(j))))
        truth["constants"].append(name)
    for j in range(10):
        name = f"spike{j:02d}"
        vals = np.zeros(n)
        idx = rng.choice(n, size=max(1, n // 100), replace=False)
        vals[idx] = rng.normal(size=len(idx))
        cols.append(numeric_column(name, vals))
        truth["noise"].append(name)
    dataset = Dataset(tuple(cols), n, Target("y", "binary", y.astype(np.int64)))
    return dataset, truth


def make_two_topic_corpus(n_docs: int = 200, seed: int = 77):
    """Documents drawn from one of two disjoint 40-term vocabularies."""
    rng = np.random.default_rng(seed)
    vocab = [[f"alpha{i:02d}" for i in range(40)], [f"beta{i:02d}" for i in range(40)]]
    docs, labels = [], []
    for _ in range(n_docs):
        label = int(rng.integers(0, 2))
        tokens = rng.choice(vocab[label], size=25).tolist()
        docs.append([tokens[i:i + 5] for i in range(0, 25, 5)])
        labels.append(label)
    return corpus_from_tokens(docs), np.array(labels)


def make_sentence_corpus(seed: int = 5, n_docs: int = 50, n_pairs: int = 10):
    """Corpus with injected boilerplate, near-duplicate pairs, and unique content.

    Returns (raw_docs, truth) where raw_docs are (id, text) pairs and truth
    maps each sentence text to its class: "boilerplate" (one low-entropy
    sentence repeated in every document), "pair" (near-duplicate sentences
    planted in two different documents), or "unique" (distinct 8-token
    sentences).
    """
    rng = np.random.default_rng(seed)
    vocab = [f"word{i:03d}" for i in range(500)]
    boilerplate = "Copyright copyright reserved."
    truth = {boilerplate: "boilerplate"}

    doc_sentences: list[list[str]] = [[] for _ in range(n_docs)]
    for d in range(n_docs):
        doc_sentences[d].append(boilerplate)
        for _ in range(4):
            words = rng.choice(vocab, size=8, replace=False).tolist()
            text = " ".join(words).capitalize() + "."
            truth[text] = "unique"
            doc_sentences[d].append(text)
    for k in range(n_pairs):
        a = f"Method{k:02d} method{k:02d} step{k:02d} step{k:02d}."
        b = f"Method{k:02d} method{k:02d} step{k:02d} step{k:02d} step{k:02d}."
        truth[a] = truth[b] = "pair"
        da, db = rng.choice(n_docs, size=2, replace=False)
        doc_sentences[da].append(a)
        doc_sentences[db].append(b)
    raw_docs = [(f"doc{d:02d}", " ".join(s)) for d, s in enumerate(doc_sentences)]
    return raw_docs, truth


# ---------------------------------------------------------------------------
# brute-force oracles


def bf_entropy_bits(symbols) -> float:
    counts: dict = {}
    for s in symbols:
        counts[s] = counts.get(s, 0) + 1
    n = sum(counts.values())
    h = 0.0
    for c in counts.values():
        p = c / n
        h -= p * math.log2(p)
    return h


def bf_mi_bits(table) -> float:
    """MI by direct summation over the joint table."""
    table = [[float(v) for v in row] for row in np.asarray(table)]
    total = sum(sum(row) for row in table)
    px = [sum(row) / total for row in table]
    py = [sum(table[i][j] for i in range(len(table))) / total for j in range(len(table[0]))]
    mi = 0.0
    for i, row in enumerate(table):
        for j, v in enumerate(row):
            if v > 0:
                p = v / total
                mi += p * math.log2(p / (px[i] * py[j]))
    return mi


def bf_js_bits(p, q) -> float:
    m = [(a + b) / 2 for a, b in zip(p, q)]

    def kl(a, ref):
        return sum(x * math.log2(x / r) for x, r in zip(a, ref) if x > 0)

    return 0.5 * kl(p, m) + 0.5 * kl(q, m)


def bf_auc(scores, labels) -> float:
    """Pair counting with half credit for ties."""
    pos = [s for s, l in zip(scores, labels) if l == 1]
    neg = [s for s, l in zip(scores, labels) if l == 0]
    wins = 0.0
    for sp in pos:
        for sn in neg:
            if sp > sn:
                wins += 1.0
            elif sp == sn:
                wins += 0.5
    return wins / (len(pos) * len(neg))


def bf_iou(a, b) -> float:
    a, b = set(a), set(b)
    if not a and not b:
        return 0.0
    inter = sum(1 for x in a if x in b)
    return inter / (len(a) + len(b) - inter)


def nmi(a, b) -> float:
    """Normalized mutual information between two label vectors."""
    a = np.asarray(a)
    b = np.asarray(b)

    def H(x):
        h = 0.0
        for v in set(x.tolist()):
            p = float((x == v).mean())
            h -= p * math.log2(p)
        return h

    mi = 0.0
    for u in set(a.tolist()):
        for v in set(b.tolist()):
            pxy = float(((a == u) & (b == v)).mean())
            if pxy > 0:
                mi += pxy * math.log2(pxy / (float((a == u).mean()) * float((b == v).mean())))
    denom = math.sqrt(H(a) * H(b))
    return mi / denom if denom > 0 else 0.0
