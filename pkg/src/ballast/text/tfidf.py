"""TF-IDF vectorization over documents or sentences.

tf is the raw count of a term in the unit; idf = ln((1+D)/(1+df)) + 1 where
D is the number of units and df the number of units containing the term
(the smoothed form never divides by zero). Rows are L2-normalized; units
containing none of the vocabulary terms stay all-zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ballast.core.sparse import SparseMatrix
from ballast.errors import ConfigError, DataError
from ballast.text.corpus import Corpus


@dataclass(frozen=True, eq=False)
class TfidfModel:
    mode: str  # "documents" | "sentences"
    terms: list[str]
    idf: np.ndarray = field(repr=False)
    matrix: SparseMatrix = field(repr=False)
    unit_ids: list[str] = field(repr=False, default_factory=list)

    @property
    def n_units(self) -> int:
        return self.matrix.n_rows

    def dense(self) -> np.ndarray:
        return self.matrix.to_dense()

    def row_sums(self) -> np.ndarray:
        """Aggregate TF-IDF weight per unit."""
        out = np.zeros(self.matrix.n_rows)
        off = self.matrix.row_offsets
        for r in range(self.matrix.n_rows):
            out[r] = self.matrix.values[off[r]:off[r + 1]].sum()
        return out


def _units(corpus: Corpus, mode: str) -> tuple[list[list[str]], list[str]]:
    if mode == "documents":
        return [list(d.tokens) for d in corpus.docs], [d.id for d in corpus.docs]
    if mode == "sentences":
        units, ids = [], []
        for d in corpus.docs:
            for i, s in enumerate(d.sentences):
                units.append(list(s))
                ids.append(f"{d.id}:{i}")
        return units, ids
    raise ConfigError(f"unknown tfidf mode {mode!r}")


def tfidf(corpus: Corpus, vocab_size: int = 1000, mode: str = "documents") -> TfidfModel:
    """TF-IDF matrix over the top `vocab_size` terms by corpus frequency."""
    if corpus.n_docs == 0:
        raise DataError("empty corpus")
    units, unit_ids = _units(corpus, mode)
    counts: dict[str, int] = {}
    for u in units:
        for t in u:
            counts[t] = counts.get(t, 0) + 1
    if not counts:
        raise DataError("empty vocabulary")
    # ties broken by first appearance in the corpus vocabulary
    terms = sorted(counts, key=lambda t: (-counts[t], corpus.vocab[t]))[:vocab_size]
    index = {t: j for j, t in enumerate(terms)}

    n_units = len(units)
    df = np.zeros(len(terms), dtype=np.int64)
    rows_data: list[tuple[np.ndarray, np.ndarray]] = []
    for u in units:
        tf: dict[int, int] = {}
        for t in u:
            j = index.get(t)
            if j is not None:
                tf[j] = tf.get(j, 0) + 1
        cols = np.array(sorted(tf), dtype=np.int32)
        vals = np.array([tf[j] for j in cols], dtype=float)
        df[cols] += 1
        rows_data.append((cols, vals))

    idf = np.log((1.0 + n_units) / (1.0 + df)) + 1.0
    offsets = np.zeros(n_units + 1, dtype=np.int32)
    all_cols, all_vals = [], []
    for r, (cols, vals) in enumerate(rows_data):
        w = vals * idf[cols]
        norm = np.linalg.norm(w)
        if norm > 0:
            w = w / norm
        offsets[r + 1] = offsets[r] + len(cols)
        all_cols.append(cols)
        all_vals.append(w)
    matrix = SparseMatrix(
        n_units,
        len(terms),
        offsets,
        np.concatenate(all_cols) if all_cols else np.zeros(0, dtype=np.int32),
        np.concatenate(all_vals) if all_vals else np.zeros(0),
    )
    return TfidfModel(mode, terms, idf, matrix, unit_ids)
