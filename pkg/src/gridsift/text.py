"""Alphabets, symbol sequences, grids and corpus ingestion.

A sequence is a ``bytes`` object whose values are symbol codes in
``0..K-1`` for an alphabet of K symbols.  Everything here is immutable
after construction and safe to share between workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

MIN_CORPUS_LEN = 170  # two windows of the default 85-symbol grid

Seq = bytes


class AlphabetError(ValueError):
    pass


class CorpusTooSmallError(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    """Ordered symbol table: code i maps to chars[i] / byte_values[i]."""

    chars: tuple[str, ...]
    byte_values: tuple[int, ...]

    def __post_init__(self):
        k = len(self.chars)
        if not 2 <= k <= 64:
            raise AlphabetError(f"alphabet size {k} outside 2..64")
        if len(set(self.chars)) != k:
            raise AlphabetError("duplicate display codepoint in alphabet")
        if len(self.byte_values) != k:
            raise AlphabetError("byte value count does not match symbol count")
        for b in self.byte_values:
            if not 0 <= b <= 255:
                raise AlphabetError(f"byte value {b} outside 0..255")

    @property
    def size(self) -> int:
        return len(self.chars)

    @property
    def code_of(self) -> dict[str, int]:
        d = self.__dict__.get("_code_of")
        if d is None:
            d = {c: i for i, c in enumerate(self.chars)}
            self.__dict__["_code_of"] = d
        return d

    def encode(self, text: str) -> Seq:
        """Map text to codes, dropping codepoints not in the alphabet."""
        table = self.code_of
        return bytes(table[ch] for ch in text if ch in table)

    def decode(self, seq: Seq) -> str:
        return "".join(self.chars[c] for c in seq)


@dataclass(frozen=True)
class Grid:
    """Row-major R x C array of symbol codes."""

    rows: int
    cols: int
    cells: Seq

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("grid dimensions must be positive")
        if len(self.cells) != self.rows * self.cols:
            raise ValueError(
                f"cell count {len(self.cells)} != {self.rows}x{self.cols}"
            )

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def row(self, i: int) -> Seq:
        return self.cells[i * self.cols : (i + 1) * self.cols]


@dataclass(frozen=True)
class Corpus:
    codes: Seq
    source: str = ""

    def __len__(self) -> int:
        return len(self.codes)


def load_alphabet(path: str | Path) -> Alphabet:
    """Read an alphabet file: one `codepoint<TAB>byte_value` pair per line.

    Blank lines and lines starting with `#` are ignored.  Codes are
    assigned in file order.
    """
    chars: list[str] = []
    values: list[int] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise AlphabetError(f"{path}:{lineno}: expected 'codepoint byte_value'")
            ch, val = parts
            if len(ch) != 1:
                raise AlphabetError(f"{path}:{lineno}: codepoint must be one character")
            try:
                b = int(val)
            except ValueError:
                raise AlphabetError(f"{path}:{lineno}: byte value {val!r} is not an integer") from None
            if not 0 <= b <= 255:
                raise AlphabetError(f"{path}:{lineno}: byte value {b} outside 0..255")
            if ch in chars:
                raise AlphabetError(f"{path}:{lineno}: duplicate codepoint {ch!r}")
            chars.append(ch)
            values.append(b)
    if not 2 <= len(chars) <= 64:
        raise AlphabetError(f"{path}: alphabet size {len(chars)} outside 2..64")
    return Alphabet(tuple(chars), tuple(values))


def ingest_corpus(
    text: str,
    alphabet: Alphabet,
    source: str = "",
    min_length: int = MIN_CORPUS_LEN,
) -> Corpus:
    """Filter a character stream down to alphabet codes, order preserved."""
    codes = alphabet.encode(text)
    if len(codes) < min_length:
        raise CorpusTooSmallError(
            f"corpus has {len(codes)} usable symbols, need at least {min_length}"
        )
    return Corpus(codes, source)


def reshape(seq: Seq, rows: int) -> Grid:
    """Lay a sequence out row-major into `rows` rows."""
    if rows < 1:
        raise ValueError("rows must be positive")
    if len(seq) % rows:
        raise ValueError(f"length {len(seq)} not divisible by {rows} rows")
    return Grid(rows, len(seq) // rows, bytes(seq))


def flatten(grid: Grid) -> Seq:
    return grid.cells


def sequence_id(seq: Seq, alphabet: Alphabet, formula: str = "sum-of-squares") -> int:
    """Numeric identifier from the byte values of adjacent symbol pairs.

    "sum-of-squares" sums b[i]^2 + b[i+1]^2 over adjacent pairs;
    "square-of-sums" sums (b[i] + b[i+1])^2 instead.
    """
    if len(seq) < 2:
        raise ValueError("sequence identifier needs at least 2 symbols")
    bv = alphabet.byte_values
    vals = [bv[c] for c in seq]
    if formula == "sum-of-squares":
        return sum(a * a + b * b for a, b in zip(vals, vals[1:]))
    if formula == "square-of-sums":
        return sum((a + b) ** 2 for a, b in zip(vals, vals[1:]))
    raise ValueError(f"unknown identifier formula {formula!r}")


def unigram_counts(corpus: Corpus, alphabet: Alphabet) -> list[int]:
    counts = [0] * alphabet.size
    for c in corpus.codes:
        counts[c] += 1
    return counts


def distribution_from_counts(counts: list[int]) -> list[float]:
    total = sum(counts)
    if total <= 0:
        raise ValueError("empty count table")
    return [c / total for c in counts]


def save_distribution(path: str | Path, alphabet: Alphabet, counts: list[int]) -> None:
    """Write per-symbol counts, one `codepoint<TAB>count` line per symbol."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# symbol unigram counts\n")
        for ch, n in zip(alphabet.chars, counts):
            fh.write(f"{ch}\t{n}\n")


def load_distribution(path: str | Path, alphabet: Alphabet) -> list[float]:
    """Read a count file written by save_distribution; returns probabilities."""
    counts = [0] * alphabet.size
    table = alphabet.code_of
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2 or parts[0] not in table:
                raise ValueError(f"{path}:{lineno}: bad distribution line {line!r}")
            counts[table[parts[0]]] = int(parts[1])
    return distribution_from_counts(counts)
