"""Grid permutation keys: row interchange, per-row reversal, coprime skip.

A key rearranges an R x C grid in three fixed steps:

  1. permute rows       (new row i takes old row ``row_perm[i]``)
  2. reverse each row whose bit is set in ``flip_mask`` (bit i = row i)
  3. flatten row-major and gather with the skip: ``out[j] = flat[(j*skip) % N]``

Every step is a bijection, so each key is a pure position permutation of
the N = R*C cells and has an exact inverse.  Keys are enumerated in a
canonical order (lexicographic row permutation rank, then flip mask,
then skip) so an integer ordinal identifies a key reproducibly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

from .text import Grid

IndexMap = tuple[int, ...]


class ReplayIncompatibleError(ValueError):
    pass


@dataclass(frozen=True)
class PermutationKey:
    row_perm: tuple[int, ...]
    flip_mask: int
    skip: int

    def __post_init__(self):
        r = len(self.row_perm)
        if sorted(self.row_perm) != list(range(r)):
            raise ValueError(f"row_perm {self.row_perm} is not a permutation of 0..{r - 1}")
        if not 0 <= self.flip_mask < (1 << r):
            raise ValueError(f"flip_mask {self.flip_mask} outside 0..{(1 << r) - 1}")
        if self.skip < 1:
            raise ValueError("skip must be positive")

    @property
    def rows(self) -> int:
        return len(self.row_perm)


KeyPath = tuple[PermutationKey, ...]


def skip_set(n: int) -> list[int]:
    """Skips 1..floor((n-1)/2) that are coprime to n, ascending."""
    if n < 3:
        raise ValueError("skip set needs a sequence of at least 3 cells")
    return [k for k in range(1, (n - 1) // 2 + 1) if math.gcd(k, n) == 1]


def key_space_size(rows: int, cols: int) -> int:
    """Number of distinct keys for one recursion level on an R x C grid."""
    return math.factorial(rows) * (1 << rows) * len(skip_set(rows * cols))


def perm_rank(perm: tuple[int, ...]) -> int:
    """Lexicographic rank of a permutation of 0..R-1 (factorial numbering)."""
    r = len(perm)
    remaining = list(range(r))
    rank = 0
    for i, p in enumerate(perm):
        rank += remaining.index(p) * math.factorial(r - 1 - i)
        remaining.remove(p)
    return rank


def perm_unrank(rank: int, rows: int) -> tuple[int, ...]:
    remaining = list(range(rows))
    out = []
    for i in range(rows):
        f = math.factorial(rows - 1 - i)
        idx, rank = divmod(rank, f)
        out.append(remaining.pop(idx))
    return tuple(out)


def enumerate_keys(rows: int, cols: int):
    """Yield every key for an R x C grid in canonical ordinal order."""
    skips = skip_set(rows * cols)
    for perm in permutations(range(rows)):
        for mask in range(1 << rows):
            for s in skips:
                yield PermutationKey(perm, mask, s)


def key_from_ordinal(ordinal: int, rows: int, cols: int) -> PermutationKey:
    skips = skip_set(rows * cols)
    per_perm = (1 << rows) * len(skips)
    if not 0 <= ordinal < math.factorial(rows) * per_perm:
        raise ValueError(f"ordinal {ordinal} outside key space")
    rank, rest = divmod(ordinal, per_perm)
    mask, skip_idx = divmod(rest, len(skips))
    return PermutationKey(perm_unrank(rank, rows), mask, skips[skip_idx])


def key_to_ordinal(key: PermutationKey, cols: int) -> int:
    rows = key.rows
    skips = skip_set(rows * cols)
    try:
        skip_idx = skips.index(key.skip)
    except ValueError:
        raise ValueError(f"skip {key.skip} not in skip set for {rows}x{cols}") from None
    return (perm_rank(key.row_perm) * (1 << rows) + key.flip_mask) * len(skips) + skip_idx


def _rearrange_map(key: PermutationKey, cols: int) -> list[int]:
    # position map of steps 1+2 (row permutation, then per-row reversal)
    out = []
    for i in range(key.rows):
        src = key.row_perm[i] * cols
        if (key.flip_mask >> i) & 1:
            out.extend(src + (cols - 1 - c) for c in range(cols))
        else:
            out.extend(src + c for c in range(cols))
    return out


def key_index_map(key: PermutationKey, n: int, check_skip: bool = True) -> IndexMap:
    """Full position map of a key: output cell j reads input cell map[j]."""
    if n % key.rows:
        raise ValueError(f"cell count {n} not divisible by {key.rows} rows")
    cols = n // key.rows
    skip = key.skip % n
    if math.gcd(skip, n) != 1:
        raise ValueError(f"skip {key.skip} not coprime to {n}")
    if check_skip and not 1 <= key.skip <= (n - 1) // 2:
        raise ValueError(f"skip {key.skip} outside skip set bound for n={n}")
    base = _rearrange_map(key, cols)
    return tuple(base[(j * skip) % n] for j in range(n))


def invert_key(key: PermutationKey, n: int) -> IndexMap:
    """Position map undoing a key; composing the two is the identity.

    The skip step is undone with the multiplicative inverse of the skip
    mod n (which exists because skips are coprime to n), then flips and
    the row permutation are undone in reverse order.
    """
    cols = n // key.rows
    inv_skip = pow(key.skip % n, -1, n)
    base = _rearrange_map(key, cols)
    # inverse of steps 1+2: position p held the value now at rearranged slot
    inv_base = [0] * n
    for j, src in enumerate(base):
        inv_base[src] = j
    # undoing the skip gather is itself a gather with the inverse multiplier
    return tuple(inv_base[(j * inv_skip) % n] for j in range(n))


def apply_index_map(grid: Grid, index_map: IndexMap) -> Grid:
    cells = grid.cells
    return Grid(grid.rows, grid.cols, bytes(cells[i] for i in index_map))


def apply_key(grid: Grid, key: PermutationKey) -> Grid:
    """Apply one key to a grid; output is a permutation of the input cells."""
    if key.rows != grid.rows:
        raise ValueError(f"key has {key.rows} rows, grid has {grid.rows}")
    return apply_index_map(grid, key_index_map(key, grid.size))


def apply_path(grid: Grid, path: KeyPath) -> Grid:
    """Apply each key of a path in order (one key per recursion level)."""
    if not path:
        raise ValueError("empty key path")
    for key in path:
        grid = apply_key(grid, key)
    return grid


def invert_path(grid: Grid, path: KeyPath) -> Grid:
    """Undo apply_path: apply each key's inverse in reverse order."""
    for key in reversed(path):
        grid = apply_index_map(grid, invert_key(key, grid.size))
    return grid


def replay(tall_grid: Grid, path: KeyPath) -> Grid:
    """Re-apply a recorded path to a grid with the same rows but any width.

    Row permutations and flips carry over unchanged; each skip is reduced
    modulo the new cell count and must stay coprime to it.
    """
    n = tall_grid.size
    for level, key in enumerate(path):
        if key.rows != tall_grid.rows:
            raise ReplayIncompatibleError(
                f"level {level}: key has {key.rows} rows, grid has {tall_grid.rows}"
            )
        if math.gcd(key.skip % n, n) != 1:
            raise ReplayIncompatibleError(
                f"level {level}: skip {key.skip} not coprime to {n} cells"
            )
    for key in path:
        tall_grid = apply_index_map(tall_grid, key_index_map(key, n, check_skip=False))
    return tall_grid


# --- key path serialization: one `perm_rank,flip_mask,skip` triple per level ---

def format_key(key: PermutationKey) -> str:
    return f"{perm_rank(key.row_perm)},{key.flip_mask},{key.skip}"


def parse_key(text: str, rows: int) -> PermutationKey:
    parts = text.strip().split(",")
    if len(parts) != 3:
        raise ValueError(f"bad key {text!r}, expected 'perm_rank,flip_mask,skip'")
    rank, mask, skip = (int(p) for p in parts)
    if not 0 <= rank < math.factorial(rows):
        raise ValueError(f"perm rank {rank} outside 0..{math.factorial(rows) - 1}")
    return PermutationKey(perm_unrank(rank, rows), mask, skip)


def format_key_path(path: KeyPath) -> str:
    """Multi-line form used by key path files: one level per line."""
    return "\n".join(format_key(k) for k in path) + "\n"


def parse_key_path(text: str, rows: int) -> KeyPath:
    keys = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        keys.append(parse_key(line, rows))
    if not keys:
        raise ValueError("key path is empty")
    return tuple(keys)


def key_path_token(path: KeyPath) -> str:
    """Single-token form used inside hit files: levels joined with ';'."""
    return ";".join(format_key(k) for k in path)


def parse_key_path_token(token: str, rows: int) -> KeyPath:
    return tuple(parse_key(part, rows) for part in token.split(";"))
