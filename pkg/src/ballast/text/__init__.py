"""Text pipeline: tokenization, corpora, TF-IDF, ranking, topics, sentence signals."""

from ballast.text.corpus import Corpus, Document, build_corpus, corpus_from_tokens, load_corpus
from ballast.text.preprocess import (
    TokenizerConfig,
    load_stopwords,
    regex_ballast,
    split_sentences,
    tokenize,
)
from ballast.text.rank import cosine_matrix, textrank
from ballast.text.sentences import (
    SentenceSignals,
    SentenceThresholds,
    load_embeddings,
    sentence_signals,
    token_entropy_bits,
)
from ballast.text.tfidf import TfidfModel, tfidf
from ballast.text.topics import TopicModel, lda_fit, umass_coherence

__all__ = [
    "Corpus",
    "Document",
    "SentenceSignals",
    "SentenceThresholds",
    "TfidfModel",
    "TokenizerConfig",
    "TopicModel",
    "build_corpus",
    "corpus_from_tokens",
    "cosine_matrix",
    "lda_fit",
    "load_corpus",
    "load_embeddings",
    "load_stopwords",
    "regex_ballast",
    "sentence_signals",
    "split_sentences",
    "textrank",
    "tfidf",
    "token_entropy_bits",
    "tokenize",
    "umass_coherence",
]
