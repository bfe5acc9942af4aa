"""Multiplicative-congruential PRNG, random word walks, and control text.

The generator is the minimal-standard Lehmer recurrence
``state' = 16807 * state mod (2^31 - 1)`` with full period 2^31 - 2.
All stochastic machinery in the package draws from it, never from the
process-global RNG, so results are reproducible across schedulers and
worker counts.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from itertools import accumulate

import numpy as np

from .text import Alphabet, Corpus, Seq
from .words import Lexicon, _hits_at

LEHMER_MODULUS = 2**31 - 1
LEHMER_MULTIPLIER = 16807

_MASK64 = (1 << 64) - 1


def lehmer_next(state: int) -> int:
    """One PRNG step; the returned value is also the next state."""
    return (LEHMER_MULTIPLIER * state) % LEHMER_MODULUS


def seed_state(seed: int) -> int:
    """Fold an arbitrary integer seed into a valid state in [1, 2^31 - 2]."""
    return seed % (LEHMER_MODULUS - 1) + 1


class Lehmer:
    """Stateful convenience wrapper; one instance per logical stream."""

    __slots__ = ("state",)

    def __init__(self, state: int):
        if not 1 <= state < LEHMER_MODULUS:
            raise ValueError(f"state {state} outside 1..{LEHMER_MODULUS - 1}")
        self.state = state

    def next(self) -> int:
        self.state = (LEHMER_MULTIPLIER * self.state) % LEHMER_MODULUS
        return self.state

    def uniform(self) -> float:
        """Strictly inside (0, 1)."""
        return self.next() / LEHMER_MODULUS

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        return int(self.uniform() * n)


def _fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h = ((h ^ b) * 0x100000001B3) & _MASK64
    return h


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def walk_seed(base_seed: int, seq: Seq) -> int:
    """Per-sequence PRNG state: mixes the run seed with the sequence content
    so results do not depend on evaluation order or worker assignment."""
    return seed_state(_splitmix64((base_seed & _MASK64) ^ _fnv1a64(seq)))


@dataclass(frozen=True)
class PathConfig:
    trials: int = 1000
    attempts_per_trial: int = 1500
    seed: int = 0

    def __post_init__(self):
        if self.trials < 1 or self.attempts_per_trial < 1:
            raise ValueError("trials and attempts_per_trial must be >= 1")


@dataclass(frozen=True)
class PathFeatures:
    maxpara: int
    num25: int
    num45: int
    num65: int
    num85: int
    iterations_to_85: int

    def vector(self) -> list[int]:
        """Canonical feature order used by the regression."""
        return [self.maxpara, self.num25, self.num45,
                self.num65, self.num85, self.iterations_to_85]


PATH_FEATURE_NAMES = ("maxpara", "num25", "num45", "num65", "num85", "iterations_to_85")


def length_thresholds(n: int) -> tuple[int, int, int, int]:
    """The 25/45/65/85 walk-length marks, scaled for rings of length != 85."""
    return tuple((n * t + 84) // 85 for t in (25, 45, 65)) + (n,)


def path_features(
    seq: Seq,
    lex: Lexicon,
    cfg: PathConfig,
    trace: list | None = None,
) -> PathFeatures:
    """Stochastic abutting-word walks around the ring.

    Each trial starts at a uniformly drawn position and greedily appends
    randomly chosen words that begin exactly where the previous one ended
    (positions mod ring length), stopping at a dead end, at full ring
    cover, or when the per-trial attempt budget runs out.  If `trace` is
    given, every appended (position, length) hit is recorded in it.
    """
    n = len(seq)
    if n < 2:
        raise ValueError("sequence too short for path walks")
    limit = min(lex.max_len, n)
    doubled = seq + seq[: limit - 1] if limit > 1 else seq
    hits = [_hits_at(doubled, p, limit, lex) for p in range(n)]

    t25, t45, t65, t85 = length_thresholds(n)
    rng = Lehmer(walk_seed(cfg.seed, seq))
    maxpara = 0
    n25 = n45 = n65 = n85 = 0
    first_full = cfg.trials + 1

    for trial in range(1, cfg.trials + 1):
        pos = rng.below(n)
        covered = 0
        for _ in range(cfg.attempts_per_trial):
            choices = hits[pos]
            if not choices:
                break
            length = choices[rng.below(len(choices))] if len(choices) > 1 else choices[0]
            if trace is not None:
                trace.append((pos, length))
            covered += length
            pos = (pos + length) % n
            if covered >= n:
                covered = n
                break
        if covered > maxpara:
            maxpara = covered
        if covered >= t25:
            n25 += 1
        if covered >= t45:
            n45 += 1
        if covered >= t65:
            n65 += 1
        if covered >= t85:
            n85 += 1
            if first_full > cfg.trials:
                first_full = trial
    return PathFeatures(maxpara, n25, n45, n65, n85, first_full)


# --- control sequences and corpus windows ---------------------------------

def _cumulative(distribution) -> list[float]:
    if any(p < 0 for p in distribution):
        raise ValueError("negative probability")
    cum = list(accumulate(distribution))
    if abs(cum[-1] - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {cum[-1]}, not 1")
    return cum


def gen_control(alphabet: Alphabet, distribution, length: int, rng: Lehmer) -> Seq:
    """Draw `length` symbols by inverse-CDF sampling of the distribution."""
    if len(distribution) != alphabet.size:
        raise ValueError("distribution arity does not match alphabet")
    cum = _cumulative(distribution)
    top = alphabet.size - 1
    return bytes(
        min(bisect.bisect_right(cum, rng.uniform()), top) for _ in range(length)
    )


def gen_control_batch(
    alphabet: Alphabet,
    distribution,
    length: int,
    count: int,
    rng: Lehmer,
) -> np.ndarray:
    """Generate `count` control rows at once; consumes exactly the same
    PRNG stream as `count` successive gen_control calls and leaves the
    generator in the same final state."""
    if len(distribution) != alphabet.size:
        raise ValueError("distribution arity does not match alphabet")
    cum = np.asarray(_cumulative(distribution))
    if count == 0:
        return np.empty((0, length), dtype=np.uint8)
    jump = pow(LEHMER_MULTIPLIER, length, LEHMER_MODULUS)
    states = np.empty(count, dtype=np.int64)
    s = rng.state
    for i in range(count):
        states[i] = s
        s = (s * jump) % LEHMER_MODULUS
    values = np.empty((count, length), dtype=np.float64)
    for j in range(length):
        states = (LEHMER_MULTIPLIER * states) % LEHMER_MODULUS
        values[:, j] = states
    rng.state = int(states[-1])
    codes = np.searchsorted(cum, values / LEHMER_MODULUS, side="right")
    return np.minimum(codes, alphabet.size - 1).astype(np.uint8)


def sample_windows(corpus: Corpus, count: int, window: int, rng: Lehmer) -> list[Seq]:
    """Fixed-length windows at PRNG-chosen offsets, uniform over valid starts."""
    n = len(corpus.codes)
    if n < window:
        raise ValueError(f"corpus of {n} symbols shorter than window {window}")
    starts = n - window + 1
    return [
        corpus.codes[s : s + window]
        for s in (rng.below(starts) for _ in range(count))
    ]
