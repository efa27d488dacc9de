"""Braid words: parsing, closure analysis, random generation, diversification.

Letter ``i`` stands for the generator sigma_i (strand i crosses over strand
i+1 reading upward), ``-i`` for its inverse.  Words are kept verbatim, never
freely reduced, so that positions stay meaningful for concordance moves.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

DEFAULT_STRANDS = (4, 12)
DEFAULT_LENGTHS = (20, 60)
RESAMPLE_CAP = 10_000


class BraidError(ValueError):
    """Malformed or invalid braid word."""


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(e) for e in self.letters))
        if self.strands < 1:
            raise BraidError(f"strand count must be positive, got {self.strands}")
        for pos, e in enumerate(self.letters):
            if e == 0:
                raise BraidError(f"letter 0 at position {pos}")
            if abs(e) >= self.strands:
                raise BraidError(
                    f"letter {e} at position {pos} out of range for {self.strands} strands"
                )

    @classmethod
    def of(cls, letters: Sequence[int], strands: int | None = None) -> BraidWord:
        letters = tuple(letters)
        if strands is None:
            strands = max((abs(e) for e in letters), default=0) + 1
        return cls(strands, letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self):
        return "[" + ",".join(map(str, self.letters)) + "]"

    def mirror(self) -> BraidWord:
        return BraidWord(self.strands, tuple(-e for e in self.letters))

    def with_letters(self, letters: Iterable[int], strands: int | None = None) -> BraidWord:
        return BraidWord(self.strands if strands is None else strands, tuple(letters))


_BRAID_RE = re.compile(r"^\s*\[(.*)\]\s*$", re.S)


def parse_braid(text: str, strands: int | None = None) -> BraidWord:
    """Parse ``[e1,e2,...]``; the strand count defaults to max|e| + 1."""
    m = _BRAID_RE.match(text)
    if not m:
        raise BraidError(f"not a bracketed braid word: {text!r}")
    body = m.group(1).strip()
    letters = []
    if body:
        for tok in body.split(","):
            tok = tok.strip()
            if not re.fullmatch(r"[+-]?\d+", tok):
                raise BraidError(f"malformed token {tok!r}")
            letters.append(int(tok))
    return BraidWord.of(letters, strands)


def closure_permutation(b: BraidWord) -> list[int]:
    """Permutation of strand positions (0-based) induced by the word."""
    perm = list(range(b.strands))  # perm[p] = strand currently at position p
    for e in b.letters:
        i = abs(e) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    # map bottom position -> top position
    out = [0] * b.strands
    for top, strand in enumerate(perm):
        out[strand] = top
    return out


def cycles(perm: Sequence[int]) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for s in range(len(perm)):
        if seen[s]:
            continue
        cyc = []
        x = s
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = perm[x]
        out.append(cyc)
    return out


def closure_components(b: BraidWord) -> int:
    """Number of link components of the braid closure."""
    return len(cycles(closure_permutation(b)))


def is_knot(b: BraidWord) -> bool:
    return closure_components(b) == 1


def writhe(b: BraidWord) -> int:
    return sum(1 if e > 0 else -1 for e in b.letters)


def random_braid(
    seed,
    strand_range: tuple[int, int] = DEFAULT_STRANDS,
    length_range: tuple[int, int] = DEFAULT_LENGTHS,
    cap: int = RESAMPLE_CAP,
) -> BraidWord:
    """Uniform random word whose closure is a knot, resampled until it is.

    Strand count and length are drawn uniformly from the inclusive ranges,
    each letter uniformly from +-{1..n-1}.
    """
    lo_n, hi_n = strand_range
    lo_l, hi_l = length_range
    if lo_n > hi_n or lo_l > hi_l or lo_n < 1 or lo_l < 0:
        raise ValueError("empty or invalid range")
    rng = random.Random(seed)
    for _ in range(cap):
        n = rng.randint(lo_n, hi_n)
        length = rng.randint(lo_l, hi_l)
        if n == 1:
            word = BraidWord(1, ())
        else:
            word = BraidWord(
                n, tuple(rng.choice((-1, 1)) * rng.randint(1, n - 1) for _ in range(length))
            )
        if is_knot(word):
            return word
    raise BraidError(f"no knot closure found in {cap} attempts")


def conjugate(b: BraidWord, e: int) -> BraidWord:
    return b.with_letters((e, *b.letters, -e))


def stabilize(b: BraidWord, sign: int = 1) -> BraidWord:
    """Markov stabilization: append +-n on n+1 strands."""
    n = b.strands
    return BraidWord(n + 1, (*b.letters, sign * n))


def insert_cancelling_pair(b: BraidWord, pos: int, e: int) -> BraidWord:
    w = list(b.letters)
    w[pos:pos] = [e, -e]
    return b.with_letters(w)


def diversify(b: BraidWord, seed, steps: int) -> BraidWord:
    """Randomly complicate the word by moves that keep the closure's knot type."""
    if not is_knot(b):
        raise BraidError("diversify needs a knot closure")
    rng = random.Random(seed)
    for _ in range(steps):
        kind = rng.randrange(3)
        if kind == 1 or b.strands == 1:
            b = stabilize(b, rng.choice((-1, 1)))
            continue
        e = rng.choice((-1, 1)) * rng.randint(1, b.strands - 1)
        if kind == 0:
            b = conjugate(b, e)
        else:
            b = insert_cancelling_pair(b, rng.randint(0, len(b)), e)
    return b
