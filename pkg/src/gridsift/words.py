"""Word dictionary with prefix lookup and ring-based coverage features.

Sequences are treated as rings: a word may wrap past the last position
back to the start, but never laps the ring more than once.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .text import Alphabet, Seq

MIN_WORD_LEN = 2
MAX_WORD_LEN = 11


class EmptyLexiconError(ValueError):
    pass


@dataclass(frozen=True)
class Lexicon:
    words: frozenset
    stems: frozenset  # strict prefixes of words, min_len or longer
    min_len: int = MIN_WORD_LEN
    max_len: int = MAX_WORD_LEN
    dropped: int = 0

    def __len__(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class WordFeatures:
    wordnum: int
    maxspan: int
    minspan: int
    unspan: int
    totspan: int

    def vector(self) -> list[int]:
        """Canonical feature order used by the regression."""
        return [self.maxspan, self.minspan, self.totspan, self.unspan, self.wordnum]


WORD_FEATURE_NAMES = ("maxspan", "minspan", "totspan", "unspan", "wordnum")


def lexicon_from_words(
    words,
    min_len: int = MIN_WORD_LEN,
    max_len: int = MAX_WORD_LEN,
    dropped: int = 0,
) -> Lexicon:
    kept = frozenset(w for w in words if min_len <= len(w) <= max_len)
    stems = set()
    for w in kept:
        for j in range(min_len, len(w)):
            stems.add(w[:j])
    if not kept:
        raise EmptyLexiconError("no usable words")
    return Lexicon(kept, frozenset(stems), min_len, max_len, dropped)


def load_lexicon(
    path: str | Path,
    alphabet: Alphabet,
    min_len: int = MIN_WORD_LEN,
    max_len: int = MAX_WORD_LEN,
) -> Lexicon:
    """Read one word per line; words outside the length bounds or with
    characters outside the alphabet are dropped (the drop count is kept)."""
    table = alphabet.code_of
    kept = set()
    dropped = 0
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            word = raw.strip()
            if not word or word.startswith("#"):
                continue
            if not (min_len <= len(word) <= max_len) or any(ch not in table for ch in word):
                dropped += 1
                continue
            kept.add(bytes(table[ch] for ch in word))
    if not kept:
        raise EmptyLexiconError(f"{path}: no usable words (dropped {dropped})")
    return lexicon_from_words(kept, min_len, max_len, dropped)


def _hits_at(doubled: Seq, p: int, limit: int, lex: Lexicon) -> list[int]:
    hits = []
    words = lex.words
    stems = lex.stems
    for length in range(lex.min_len, limit + 1):
        chunk = doubled[p : p + length]
        if chunk in words:
            hits.append(length)
        if chunk not in stems:
            break
    return hits


def words_at(seq: Seq, p: int, lex: Lexicon) -> list[int]:
    """Lengths of lexicon words starting at ring position p, ascending."""
    n = len(seq)
    if not 0 <= p < n:
        raise ValueError(f"position {p} outside sequence of length {n}")
    limit = min(lex.max_len, n)
    doubled = seq + seq[: limit - 1] if limit > 1 else seq
    return _hits_at(doubled, p, limit, lex)


def word_features(seq: Seq, lex: Lexicon) -> WordFeatures:
    """Ring coverage statistics over every word hit at every start position."""
    n = len(seq)
    if n < 2:
        raise ValueError("sequence too short for word features")
    limit = min(lex.max_len, n)
    doubled = seq + seq[: limit - 1] if limit > 1 else seq
    span = [0] * n
    wordnum = 0
    for p in range(n):
        for length in _hits_at(doubled, p, limit, lex):
            wordnum += 1
            for i in range(p, p + length):
                span[i % n] += 1
    totspan = sum(span)
    return WordFeatures(
        wordnum=wordnum,
        maxspan=max(span),
        minspan=min(span),
        unspan=sum(1 for s in span if s == 0),
        totspan=totspan,
    )
