"""Pruned pair/triple/quad count tables and the features built from them.

Feature extraction is position-based: every window position whose n-gram
survives pruning contributes 1 to the count feature and the stored corpus
count to the score feature, so repeated n-grams add their count once per
occurrence.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .text import Alphabet, Corpus, Seq

NGRAM_SIZES = (2, 3, 4)
DEFAULT_PRUNE = 5

QuadSet = frozenset  # of 4-symbol byte strings


@dataclass(frozen=True)
class NgramModel:
    """Corpus n-gram counts for n in {2,3,4}, entries with count <= prune dropped."""

    tables: dict[int, dict[bytes, int]]
    prune_threshold: int = DEFAULT_PRUNE


@dataclass(frozen=True)
class QptFeatures:
    quadnum: int
    quadscore: int
    tripnum: int
    tripscore: int
    pairnum: int
    pairscore: int

    def vector(self) -> list[int]:
        """Canonical feature order used by the regression."""
        return [self.quadnum, self.quadscore, self.tripnum,
                self.tripscore, self.pairnum, self.pairscore]


QPT_FEATURE_NAMES = ("quadnum", "quadscore", "tripnum", "tripscore", "pairnum", "pairscore")


def build_ngram_model(corpus: Corpus, prune_threshold: int = DEFAULT_PRUNE) -> NgramModel:
    """Count all contiguous non-wrapping 2/3/4-grams and prune rare ones."""
    codes = corpus.codes
    if len(codes) < 4:
        raise ValueError(f"corpus of {len(codes)} symbols is too short to count quads")
    arr = np.frombuffer(codes, dtype=np.uint8).astype(np.int64)
    tables: dict[int, dict[bytes, int]] = {}
    for n in NGRAM_SIZES:
        # pack base-256 big-endian: the packed int's bytes are the n-gram itself
        keys = np.zeros(len(arr) - n + 1, dtype=np.int64)
        for j in range(n):
            keys = (keys << 8) | arr[j : len(arr) - n + 1 + j]
        uniq, counts = np.unique(keys, return_counts=True)
        keep = counts > prune_threshold
        tables[n] = {
            int(v).to_bytes(n, "big"): int(c)
            for v, c in zip(uniq[keep], counts[keep])
        }
    return NgramModel(tables, prune_threshold)


def qpt_features(seq: Seq, model: NgramModel) -> QptFeatures:
    """Slide non-wrapping windows over the sequence and tally table hits."""
    if len(seq) < 4:
        raise ValueError("sequence too short for quad features")
    nums = {}
    scores = {}
    for n in NGRAM_SIZES:
        table = model.tables[n]
        num = 0
        total = 0
        for i in range(len(seq) - n + 1):
            c = table.get(seq[i : i + n])
            if c is not None:
                num += 1
                total += c
        nums[n] = num
        scores[n] = total
    return QptFeatures(nums[4], scores[4], nums[3], scores[3], nums[2], scores[2])


def quad_set(seq: Seq) -> QuadSet:
    """Distinct 4-grams of a sequence."""
    return frozenset(seq[i : i + 4] for i in range(len(seq) - 3))


def quads_in_common(seq: Seq, reference: QuadSet) -> int:
    """How many distinct quads the sequence shares with the reference set."""
    if len(seq) < 4:
        raise ValueError("sequence too short for quad comparison")
    return len(quad_set(seq) & reference)


# --- model persistence ---------------------------------------------------

def save_ngram_model(path: str | Path, model: NgramModel, alphabet: Alphabet) -> None:
    """Text format: per table a `ngrams n prune count` header then gram<TAB>count lines."""
    with open(path, "w", encoding="utf-8") as fh:
        for n in NGRAM_SIZES:
            table = model.tables[n]
            fh.write(f"ngrams {n} {model.prune_threshold} {len(table)}\n")
            for gram in sorted(table):
                fh.write(f"{alphabet.decode(gram)}\t{table[gram]}\n")


def load_ngram_model(path: str | Path, alphabet: Alphabet) -> NgramModel:
    tables: dict[int, dict[bytes, int]] = {}
    expected: dict[int, int] = {}
    prune = DEFAULT_PRUNE
    with open(path, encoding="utf-8") as fh:
        current: dict[bytes, int] | None = None
        n = 0
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("ngrams "):
                parts = line.split()
                if len(parts) != 4:
                    raise ValueError(f"{path}:{lineno}: bad table header")
                n, prune, expected[int(parts[1])] = int(parts[1]), int(parts[2]), int(parts[3])
                current = {}
                tables[n] = current
                continue
            if current is None:
                raise ValueError(f"{path}:{lineno}: entry before table header")
            gram_text, _, count = line.partition("\t")
            gram = alphabet.encode(gram_text)
            if len(gram) != n or len(gram_text) != n:
                raise ValueError(f"{path}:{lineno}: {gram_text!r} is not a valid {n}-gram")
            current[gram] = int(count)
    for n in NGRAM_SIZES:
        if n not in tables:
            raise ValueError(f"{path}: missing table for n={n}")
        if len(tables[n]) != expected[n]:
            raise ValueError(
                f"{path}: table n={n} has {len(tables[n])} entries, header says {expected[n]}"
            )
    return NgramModel(tables, prune)


# --- dense lookup tables for batch scoring --------------------------------

@dataclass(frozen=True)
class PackedTables:
    """Count tables as dense arrays indexed by base-K packed n-grams."""

    k: int
    pair: np.ndarray
    trip: np.ndarray
    quad: np.ndarray

    @classmethod
    def from_model(cls, model: NgramModel, k: int) -> "PackedTables":
        arrays = {}
        for n in NGRAM_SIZES:
            table = np.zeros(k**n, dtype=np.int32)
            for gram, count in model.tables[n].items():
                idx = 0
                for c in gram:
                    if c >= k:
                        raise ValueError(f"code {c} outside alphabet of {k}")
                    idx = idx * k + c
                table[idx] = count
            arrays[n] = table
        return cls(k, arrays[2], arrays[3], arrays[4])


def batch_qpt_features(seqs: np.ndarray, tables: PackedTables) -> np.ndarray:
    """QPT feature matrix for a (B, L) batch of code rows.

    Returns (B, 6) int64 in canonical order.  Matches qpt_features exactly;
    the scalar path is kept as an independent cross-check.
    """
    k = tables.k
    s = seqs.astype(np.int32, copy=False)
    p = s[:, :-1] * k + s[:, 1:]
    t = p[:, :-1] * k + s[:, 2:]
    q = t[:, :-1] * k + s[:, 3:]
    pc = tables.pair[p]
    tc = tables.trip[t]
    qc = tables.quad[q]
    out = np.empty((seqs.shape[0], 6), dtype=np.int64)
    out[:, 0] = (qc > 0).sum(axis=1)
    out[:, 1] = qc.sum(axis=1, dtype=np.int64)
    out[:, 2] = (tc > 0).sum(axis=1)
    out[:, 3] = tc.sum(axis=1, dtype=np.int64)
    out[:, 4] = (pc > 0).sum(axis=1)
    out[:, 5] = pc.sum(axis=1, dtype=np.int64)
    return out
