"""Corpus model: documents -> sentences -> tokens, with vocabulary and
document-frequency table.

Documents come either from JSONL records with {id, title, abstract, body}
fields or from plain text (one document per line). Documents with fewer
whitespace-separated words than `min_words` are dropped at load time; the
count of dropped documents is recorded on the corpus.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from ballast.errors import DataError
from ballast.text.preprocess import TokenizerConfig, split_sentences, tokenize

log = logging.getLogger(__name__)

CORPUS_TEXT_FIELDS = ("title", "abstract", "body")


@dataclass(frozen=True)
class Document:
    id: str
    sentences: tuple[tuple[str, ...], ...]  # token lists
    texts: tuple[str, ...]  # raw sentence strings, parallel to `sentences`

    @property
    def tokens(self) -> list[str]:
        return [t for s in self.sentences for t in s]


@dataclass(frozen=True, eq=False)
class Corpus:
    docs: tuple[Document, ...]
    vocab: dict[str, int] = field(repr=False)
    doc_freq: np.ndarray = field(repr=False, compare=False)
    dropped_short: int = 0

    @property
    def n_docs(self) -> int:
        return len(self.docs)

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    @property
    def n_sentences(self) -> int:
        return sum(len(d.sentences) for d in self.docs)

    def sentence_index(self) -> list[tuple[str, int]]:
        """(doc_id, sentence position) per sentence, in corpus order."""
        return [(d.id, i) for d in self.docs for i in range(len(d.sentences))]

    def term_count(self, term: str) -> int:
        """Number of documents containing `term`."""
        idx = self.vocab.get(term)
        if idx is None:
            raise DataError(f"term {term!r} not in corpus vocabulary")
        return int(self.doc_freq[idx])

    def cooccurrence_count(self, a: str, b: str) -> int:
        """Number of documents containing both terms."""
        for t in (a, b):
            if t not in self.vocab:
                raise DataError(f"term {t!r} not in corpus vocabulary")
        n = 0
        for d in self.docs:
            toks = set(d.tokens)
            if a in toks and b in toks:
                n += 1
        return n


def build_corpus(
    raw_docs,
    config: TokenizerConfig | None = None,
    normalizer=None,
    dropped_short: int = 0,
) -> Corpus:
    """Build a Corpus from (id, text) pairs.

    `normalizer`, when given, maps each token to a canonical form (stemming
    or lemmatization hook); tokens mapping to "" are dropped.
    """
    config = config or TokenizerConfig()
    docs = []
    vocab: dict[str, int] = {}
    seen_ids: set[str] = set()
    df_sets: list[set[int]] = []
    for doc_id, text in raw_docs:
        doc_id = str(doc_id)
        if doc_id in seen_ids:
            raise DataError(f"duplicate document id {doc_id!r}")
        seen_ids.add(doc_id)
        texts = split_sentences(text)
        sentences = []
        doc_terms: set[int] = set()
        for s in texts:
            toks = tokenize(s, config)
            if normalizer is not None:
                toks = [t for t in (normalizer(t) for t in toks) if t]
            for t in toks:
                doc_terms.add(vocab.setdefault(t, len(vocab)))
            sentences.append(tuple(toks))
        docs.append(Document(doc_id, tuple(sentences), tuple(texts)))
        df_sets.append(doc_terms)
    doc_freq = np.zeros(len(vocab), dtype=np.int64)
    for terms in df_sets:
        for t in terms:
            doc_freq[t] += 1
    return Corpus(tuple(docs), vocab, doc_freq, dropped_short)


def corpus_from_tokens(token_docs, doc_ids=None) -> Corpus:
    """Corpus from pre-tokenized documents (lists of sentence token lists)."""
    docs = []
    vocab: dict[str, int] = {}
    df_sets = []
    for d, sentences in enumerate(token_docs):
        doc_id = str(doc_ids[d]) if doc_ids is not None else f"d{d}"
        terms: set[int] = set()
        sent_tuples = []
        for toks in sentences:
            toks = tuple(str(t) for t in toks)
            for t in toks:
                terms.add(vocab.setdefault(t, len(vocab)))
            sent_tuples.append(toks)
        docs.append(Document(doc_id, tuple(sent_tuples), tuple(" ".join(s) for s in sent_tuples)))
        df_sets.append(terms)
    doc_freq = np.zeros(len(vocab), dtype=np.int64)
    for terms in df_sets:
        for t in terms:
            doc_freq[t] += 1
    return Corpus(tuple(docs), vocab, doc_freq)


def _record_text(obj: dict) -> str:
    parts = [str(obj[f]) for f in CORPUS_TEXT_FIELDS if obj.get(f)]
    return " ".join(parts)


def load_corpus(
    path,
    min_words: int = 0,
    config: TokenizerConfig | None = None,
    normalizer=None,
) -> Corpus:
    """Load a corpus from JSONL ({id, title, abstract, body}) or plain text.

    Plain-text files hold one document per line. Documents with fewer than
    `min_words` whitespace words are excluded; the corpus records how many.
    """
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    raw: list[tuple[str, str]] = []
    dropped = 0
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("{"):
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise DataError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from exc
                doc_id = str(obj.get("id", f"doc{lineno}"))
                text = _record_text(obj)
            else:
                doc_id, text = f"doc{lineno}", line
            if len(text.split()) < min_words:
                dropped += 1
                continue
            raw.append((doc_id, text))
    if not raw:
        raise DataError(f"{path}: no documents left after the {min_words}-word filter")
    if dropped:
        log.info("%s: dropped %d documents shorter than %d words", path, dropped, min_words)
    return build_corpus(raw, config, normalizer, dropped_short=dropped)
