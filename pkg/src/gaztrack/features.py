"""Bag-of-words feature extraction: folding, tokenization, vocabulary,
and sparse count vectors for the direction classifier."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import EmptyVocabulary
from .ingest import NormalizedText

# A token is a maximal run of letters/digits; underscore is punctuation here.
_TOKEN = re.compile(r"[^\W_]+")


def fold(text: str) -> str:
    """Accent- and case-fold: compatibility-decompose, strip combining
    marks, lowercase. "Decisão" -> "decisao", "nº" -> "no"."""
    decomposed = unicodedata.normalize("NFKD", text)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    return stripped.lower()


def tokenize(text: NormalizedText | str) -> list[str]:
    """Split normalized text into folded tokens, punctuation discarded,
    order preserved."""
    raw = text.text if isinstance(text, NormalizedText) else text
    return _TOKEN.findall(fold(raw))


def token_spans(text: str) -> list[tuple[str, int, int]]:
    """Folded tokens paired with the [start, end) character span of the raw
    token each came from, for highlighting matches in the original text.

    Folding is applied per raw token; in the rare case a single raw token
    folds into several word runs, every piece inherits the raw span.
    """
    out: list[tuple[str, int, int]] = []
    for m in _TOKEN.finditer(text):
        for piece in _TOKEN.findall(fold(m.group())):
            out.append((piece, m.start(), m.end()))
    return out


@dataclass(frozen=True)
class Vocabulary:
    """Bijection between tokens and dense indices in [0, size)."""

    tokens: tuple[str, ...]
    index_of: dict[str, int]
    min_df: int

    @property
    def size(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index_of

    @classmethod
    def from_tokens(cls, tokens: Iterable[str], min_df: int = 1) -> "Vocabulary":
        toks = tuple(tokens)
        return cls(tokens=toks, index_of={t: i for i, t in enumerate(toks)}, min_df=min_df)


@dataclass(frozen=True)
class CountVector:
    """Sparse token counts (vocabulary index -> count) plus their sum."""

    counts: dict[int, int]
    total: int


def build_vocab(corpus: Iterable[list[str]], min_df: int = 1) -> Vocabulary:
    """Index every token that appears in at least min_df distinct documents,
    in order of first appearance in the corpus."""
    if min_df < 1:
        raise ValueError(f"min_df must be >= 1, got {min_df}")
    first_seen: list[str] = []
    df: dict[str, int] = {}
    for doc in corpus:
        seen_in_doc: set[str] = set()
        for token in doc:
            if token in seen_in_doc:
                continue
            seen_in_doc.add(token)
            if token not in df:
                first_seen.append(token)
                df[token] = 0
            df[token] += 1
    kept = [t for t in first_seen if df[t] >= min_df]
    if not kept:
        raise EmptyVocabulary(min_df)
    return Vocabulary.from_tokens(kept, min_df=min_df)


def vectorize(tokens: list[str], vocab: Vocabulary) -> CountVector:
    """Count in-vocabulary tokens; out-of-vocabulary tokens are dropped."""
    counts: dict[int, int] = {}
    total = 0
    for token in tokens:
        idx = vocab.index_of.get(token)
        if idx is None:
            continue
        counts[idx] = counts.get(idx, 0) + 1
        total += 1
    return CountVector(counts=counts, total=total)


def save_vocab(vocab: Vocabulary, path: str | Path) -> None:
    """Persist as UTF-8 text, one token per line; line number = index."""
    Path(path).write_text("\n".join(vocab.tokens) + "\n", encoding="utf-8")


def load_vocab(path: str | Path, min_df: int = 1) -> Vocabulary:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return Vocabulary.from_tokens([ln for ln in lines if ln], min_df=min_df)
