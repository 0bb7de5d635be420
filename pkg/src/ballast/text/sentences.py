"""Sentence-level ballast signals.

Four raw signals per sentence, each paired with a boolean flag:

* aggregate TF-IDF weight, flagged in the lowest decile of the distribution;
* token entropy in bits, flagged below a fixed threshold (default 1.5);
* max cosine similarity to any other sentence, flagged at or above 0.95
  (on ingested embeddings when provided, else on sentence TF-IDF rows);
* Jensen-Shannon divergence between the sentence topic mixture and its
  document's mixture, flagged in the top decile (skipped without a model).

Decile thresholds need at least 10 sentences. The downstream voting rule
(quorum aggregation over these flags) lives in the scoring module.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from ballast.errors import DataError
from ballast.redundancy import js_divergence
from ballast.text.corpus import Corpus
from ballast.text.rank import cosine_matrix
from ballast.text.tfidf import TfidfModel, tfidf
from ballast.text.topics import TopicModel

SIGNAL_COLUMNS = ("tfidf_sum", "entropy_bits", "max_cosine", "topic_js")
FLAG_COLUMNS = ("low_tfidf", "low_entropy", "redundant", "off_topic")


@dataclass(frozen=True)
class SentenceThresholds:
    tfidf_decile: float = 0.1
    entropy_max: float = 1.5
    cosine_min: float = 0.95
    js_decile: float = 0.9


@dataclass(frozen=True, eq=False)
class SentenceSignals:
    doc_ids: list[str]
    positions: np.ndarray  # sentence index within its document
    texts: list[str]
    tfidf_sum: np.ndarray = field(repr=False)
    entropy_bits: np.ndarray = field(repr=False)
    max_cosine: np.ndarray = field(repr=False)
    topic_js: np.ndarray = field(repr=False)  # NaN when no topic model
    flags: np.ndarray = field(repr=False)  # n x 4 bool, FLAG_COLUMNS order
    thresholds: SentenceThresholds = SentenceThresholds()

    @property
    def n_sentences(self) -> int:
        return len(self.doc_ids)

    def votes(self) -> np.ndarray:
        return self.flags.sum(axis=1)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["doc_id", "sentence_index", *SIGNAL_COLUMNS, *FLAG_COLUMNS, "votes", "text"]
            )
            for i in range(self.n_sentences):
                js = self.topic_js[i]
                writer.writerow(
                    [
                        self.doc_ids[i],
                        int(self.positions[i]),
                        format(self.tfidf_sum[i], ".9g"),
                        format(self.entropy_bits[i], ".9g"),
                        format(self.max_cosine[i], ".9g"),
                        "" if np.isnan(js) else format(js, ".9g"),
                        *(int(v) for v in self.flags[i]),
                        int(self.flags[i].sum()),
                        self.texts[i],
                    ]
                )


def token_entropy_bits(tokens) -> float:
    """Entropy of the empirical token distribution within one sentence."""
    counts: dict[str, int] = {}
    for t in tokens:
        counts[t] = counts.get(t, 0) + 1
    n = sum(counts.values())
    if n == 0 or len(counts) <= 1:
        return 0.0
    p = np.array(list(counts.values()), dtype=float) / n
    return float(-(p * np.log2(p)).sum())


def load_embeddings(path) -> dict[str, np.ndarray]:
    """Load unit embeddings from CSV rows `unit_id,v0,v1,...`."""
    out: dict[str, np.ndarray] = {}
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            try:
                vec = np.array([float(v) for v in row[1:]], dtype=float)
            except ValueError:
                raise DataError(f"{path}:{lineno}: bad embedding value") from None
            if row[0] in out:
                raise DataError(f"{path}:{lineno}: duplicate unit id {row[0]!r}")
            out[row[0]] = vec
    if not out:
        raise DataError(f"{path}: no embeddings")
    return out


def sentence_signals(
    corpus: Corpus,
    tfidf_model: TfidfModel | None = None,
    topic_model: TopicModel | None = None,
    embeddings: dict[str, np.ndarray] | None = None,
    thresholds: SentenceThresholds = SentenceThresholds(),
    vocab_size: int = 1000,
) -> SentenceSignals:
    """Compute the four per-sentence signals and their threshold flags."""
    index = corpus.sentence_index()
    n = len(index)
    if n == 0:
        raise DataError("corpus has no sentences")
    if n < 10:
        raise DataError(f"decile thresholds need at least 10 sentences, got {n}")
    if tfidf_model is None or tfidf_model.mode != "sentences":
        tfidf_model = tfidf(corpus, vocab_size=vocab_size, mode="sentences")

    doc_ids = [d for d, _ in index]
    positions = np.array([i for _, i in index], dtype=np.int64)
    sentences = [d.sentences[i] for d in corpus.docs for i in range(len(d.sentences))]
    texts = [d.texts[i] for d in corpus.docs for i in range(len(d.texts))]

    sums = tfidf_model.row_sums()
    entropy = np.array([token_entropy_bits(s) for s in sentences])

    if embeddings is not None:
        unit_ids = [f"{d}:{i}" for d, i in index]
        missing = [u for u in unit_ids if u not in embeddings]
        if missing:
            raise DataError(f"embeddings missing for {len(missing)} sentences (first: {missing[0]})")
        vectors = np.vstack([embeddings[u] for u in unit_ids])
    else:
        vectors = tfidf_model.dense()
    sim = cosine_matrix(vectors)
    np.fill_diagonal(sim, -1.0)
    max_cos = sim.max(axis=1) if n > 1 else np.zeros(n)
    max_cos = np.maximum(max_cos, 0.0)

    topic_js = np.full(n, np.nan)
    if topic_model is not None:
        doc_rows = {d.id: topic_model.doc_topic[j] for j, d in enumerate(corpus.docs)}
        pos = 0
        for d in corpus.docs:
            for s in d.sentences:
                mix = topic_model.sentence_topics(s)
                topic_js[pos] = js_divergence(mix, doc_rows[d.id])
                pos += 1

    t = thresholds
    tfidf_cut = float(np.quantile(sums, t.tfidf_decile))
    flags = np.zeros((n, 4), dtype=bool)
    flags[:, 0] = sums <= tfidf_cut
    flags[:, 1] = entropy < t.entropy_max
    flags[:, 2] = max_cos >= t.cosine_min
    if topic_model is not None:
        js_cut = float(np.quantile(topic_js, t.js_decile))
        flags[:, 3] = topic_js >= js_cut
    return SentenceSignals(doc_ids, positions, texts, sums, entropy, max_cos, topic_js, flags, t)
