"""Topic modeling: collapsed Gibbs LDA and UMass topic coherence.

The sampler is a single-threaded reference implementation: token visiting
order, the per-iteration uniform draws, and the count updates are all fixed,
so a (corpus, K, iterations, seed) tuple always reproduces the same model
bit for bit. Priors are symmetric with alpha = 50/K and beta = 0.01 unless
overridden.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ballast.errors import ConfigError, DataError
from ballast.text.corpus import Corpus


@dataclass(frozen=True, eq=False)
class TopicModel:
    n_topics: int
    topic_word: np.ndarray = field(repr=False)  # K x V, rows sum to 1
    doc_topic: np.ndarray = field(repr=False)  # D x K, rows sum to 1
    seed: int = 0
    terms: list[str] = field(default_factory=list, repr=False)

    def top_words(self, topic: int, m: int = 10) -> list[str]:
        row = self.topic_word[topic]
        top = np.argsort(-row, kind="stable")[:m]
        return [self.terms[j] for j in top]

    def sentence_topics(self, tokens, alpha: float | None = None) -> np.ndarray:
        """Fold-in topic mixture for a token list.

        Each token is soft-assigned across topics proportionally to its
        column of the topic-word matrix; the smoothed sums are normalized.
        Deterministic (no sampling).
        """
        K = self.n_topics
        alpha = 50.0 / K if alpha is None else alpha
        index = {t: j for j, t in enumerate(self.terms)}
        acc = np.full(K, alpha)
        for t in tokens:
            j = index.get(t)
            if j is None:
                continue
            col = self.topic_word[:, j]
            s = col.sum()
            if s > 0:
                acc += col / s
        return acc / acc.sum()


def lda_fit(
    corpus: Corpus,
    n_topics: int,
    iterations: int = 200,
    seed: int = 0,
    alpha: float | None = None,
    beta: float = 0.01,
) -> TopicModel:
    """Fit LDA by collapsed Gibbs sampling with a fixed iteration count."""
    K = int(n_topics)
    if K < 1:
        raise ConfigError("n_topics must be >= 1")
    V = corpus.vocab_size
    if V == 0:
        raise DataError("empty vocabulary")
    if K > V:
        raise ConfigError(f"n_topics={K} exceeds vocabulary size {V}")
    if alpha is None:
        alpha = 50.0 / K
    terms = sorted(corpus.vocab, key=corpus.vocab.get)

    docs = [[corpus.vocab[t] for t in d.tokens] for d in corpus.docs]
    D = len(docs)
    rng = np.random.default_rng(seed)

    n_dk = [[0] * K for _ in range(D)]
    n_kw = [[0] * V for _ in range(K)]
    n_k = [0] * K
    z: list[list[int]] = []
    for d, tokens in enumerate(docs):
        init = rng.integers(0, K, size=len(tokens))
        zd = [int(k) for k in init]
        for w, k in zip(tokens, zd):
            n_dk[d][k] += 1
            n_kw[k][w] += 1
            n_k[k] += 1
        z.append(zd)

    n_tokens = sum(len(t) for t in docs)
    vbeta = V * beta
    cum = [0.0] * K
    for _ in range(iterations):
        if K == 1 or n_tokens == 0:
            break
        us = rng.random(n_tokens)
        pos = 0
        for d, tokens in enumerate(docs):
            ndk = n_dk[d]
            zd = z[d]
            for i, w in enumerate(tokens):
                k = zd[i]
                ndk[k] -= 1
                n_kw[k][w] -= 1
                n_k[k] -= 1
                total = 0.0
                for t in range(K):
                    total += (ndk[t] + alpha) * (n_kw[t][w] + beta) / (n_k[t] + vbeta)
                    cum[t] = total
                u = us[pos] * total
                pos += 1
                k = 0
                while cum[k] < u:
                    k += 1
                zd[i] = k
                ndk[k] += 1
                n_kw[k][w] += 1
                n_k[k] += 1

    doc_topic = (np.asarray(n_dk, dtype=float) + alpha)
    doc_topic /= doc_topic.sum(axis=1, keepdims=True)
    topic_word = (np.asarray(n_kw, dtype=float) + beta)
    topic_word /= topic_word.sum(axis=1, keepdims=True)
    return TopicModel(K, topic_word, doc_topic, seed, terms)


def umass_coherence(top_words, corpus: Corpus) -> float:
    """UMass coherence of a word list over document-level co-occurrences.

    Averages ln((D(w_i, w_j) + 1) / D(w_j)) over ordered pairs i < j; every
    word must occur in the corpus so the denominator is at least 1.
    """
    words = list(top_words)
    if len(words) < 2:
        raise ConfigError("umass_coherence needs at least 2 words")
    m = len(words)
    total = 0.0
    for j in range(1, m):
        dj = corpus.term_count(words[j])
        for i in range(j):
            dij = corpus.cooccurrence_count(words[i], words[j])
            total += np.log((dij + 1.0) / dj)
    return float(2.0 * total / (m * (m - 1)))
