"""Rule-based tokenization, sentence segmentation, and regex indicators.

The tokenizer splits on anything that is not a word character, then applies
its options in a fixed order: lowercase, stopword drop, numeric drop. The
sentence splitter breaks at ., ! or ? followed by whitespace and a capital
letter, guarded by a list of common abbreviations. Both are deliberately
simple; a token normalizer hook is accepted wherever a corpus is built so
callers can plug in stemming or lemmatization.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from ballast.errors import ConfigError

_WORD_RE = re.compile(r"\w+", re.UNICODE)
_SENTENCE_BREAK_RE = re.compile(r"[.!?]+(?=\s+[A-Z])")

# chunks (final period stripped) that never end a sentence
ABBREVIATIONS = frozenset(
    "e.g i.e etc vs cf al fig figs eq eqs no sec dr mr mrs ms prof st jr sr".split()
)


@lru_cache(maxsize=8)
def load_stopwords(path=None) -> frozenset[str]:
    """Stopword set from a one-token-per-line file (packaged list by default)."""
    if path is None:
        text = resources.files("ballast.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


@dataclass(frozen=True)
class TokenizerConfig:
    lowercase: bool = True
    stopwords: frozenset = field(default_factory=load_stopwords)
    drop_numeric: bool = True


def tokenize(text: str, config: TokenizerConfig | None = None) -> list[str]:
    """Split on non-word characters, then lowercase / stopword / numeric filters."""
    config = config or TokenizerConfig()
    tokens = _WORD_RE.findall(text)
    if config.lowercase:
        tokens = [t.lower() for t in tokens]
    if config.stopwords:
        tokens = [t for t in tokens if t not in config.stopwords]
    if config.drop_numeric:
        tokens = [t for t in tokens if not t.isdigit()]
    return tokens


def split_sentences(text: str) -> list[str]:
    """Sentence strings; terminator must precede whitespace plus a capital."""
    text = text.strip()
    if not text:
        return []
    pieces: list[str] = []
    start = 0
    for m in _SENTENCE_BREAK_RE.finditer(text):
        left = text[start:m.end()]
        last = left.rsplit(None, 1)[-1] if left.split() else ""
        if last.rstrip(".!?").lower() in ABBREVIATIONS:
            continue
        pieces.append(left.strip())
        start = m.end()
    tail = text[start:].strip()
    if tail:
        pieces.append(tail)
    return pieces


def compile_patterns(patterns) -> list[re.Pattern]:
    compiled = []
    for i, pat in enumerate(patterns):
        try:
            compiled.append(re.compile(pat))
        except re.error as exc:
            raise ConfigError(f"invalid pattern #{i} ({pat!r}): {exc}") from exc
    return compiled


def regex_ballast(units, patterns) -> list[int]:
    """1 per unit when any pattern matches (ballast flag), else 0.

    `units` may be a single string or an iterable of strings. The matching
    utility signal is the negation of this flag.
    """
    compiled = compile_patterns(patterns)
    if isinstance(units, str):
        units = [units]
    return [1 if any(p.search(u) for p in compiled) else 0 for u in units]
