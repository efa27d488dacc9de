"""Genus-one concordance moves on braid words and on diagrams.

A crossing change flips one letter, a switch flips a pair of letters of
opposite sign, a resolution deletes two letters and a de-resolution inserts
two.  Positions are 0-based indices into the stored word, which is never
reduced, so a move can be read off by comparing two printed words.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .braid import BraidWord, is_knot
from .diagram import Diagram, DiagramError, PDCode

CROSSING_CHANGE = "crossing_change"
SWITCH = "switch"
RESOLVE = "resolve"
DERESOLVE = "deresolve"
ALL_KINDS = (CROSSING_CHANGE, SWITCH, RESOLVE, DERESOLVE)
PD_KINDS = (CROSSING_CHANGE, SWITCH, RESOLVE)
DEFAULT_DERES_SAMPLES = 800


class MoveError(ValueError):
    """Move does not apply: bad index, sign condition, or a link results."""


@dataclass(frozen=True, order=True)
class ConcordanceMove:
    kind: str
    i: int
    j: int | None = None
    a: int | None = None
    b: int | None = None

    def __post_init__(self):
        if self.kind not in ALL_KINDS:
            raise MoveError(f"unknown move kind {self.kind!r}")
        if self.kind == CROSSING_CHANGE:
            if self.j is not None:
                raise MoveError("a crossing change takes one index")
        else:
            if self.j is None:
                raise MoveError(f"{self.kind} needs two indices")
            if not self.i < self.j:
                raise MoveError("indices must satisfy i < j")
        if self.kind == DERESOLVE and (not self.a or not self.b):
            raise MoveError("a de-resolution needs two nonzero letters")

    @classmethod
    def crossing_change(cls, i: int) -> ConcordanceMove:
        return cls(CROSSING_CHANGE, i)

    @classmethod
    def switch(cls, i: int, j: int) -> ConcordanceMove:
        return cls(SWITCH, i, j)

    @classmethod
    def resolve(cls, i: int, j: int) -> ConcordanceMove:
        return cls(RESOLVE, i, j)

    @classmethod
    def deresolve(cls, i: int, a: int, j: int, b: int) -> ConcordanceMove:
        """Insert letter ``a`` so it lands at index ``i`` and ``b`` at ``j``."""
        return cls(DERESOLVE, i, j, a, b)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "i": self.i}
        if self.j is not None:
            out["j"] = self.j
        if self.kind == DERESOLVE:
            out["a"] = self.a
            out["b"] = self.b
        return out

    @classmethod
    def from_json(cls, obj: dict) -> ConcordanceMove:
        return cls(obj["kind"], obj["i"], obj.get("j"), obj.get("a"), obj.get("b"))

    def __str__(self):
        if self.kind == CROSSING_CHANGE:
            return f"CrossingChange({self.i})"
        if self.kind == SWITCH:
            return f"SwitchPair({self.i},{self.j})"
        if self.kind == RESOLVE:
            return f"Resolve({self.i},{self.j})"
        return f"DeResolve({self.i},{self.a},{self.j},{self.b})"


# -- braid words ---------------------------------------------------------------


def _rewrite(b: BraidWord, m: ConcordanceMove) -> BraidWord:
    w = list(b.letters)
    L = len(w)
    if m.kind == DERESOLVE:
        if not 0 <= m.i < m.j <= L + 1:
            raise MoveError(f"insertion positions {m.i},{m.j} out of range for length {L}")
        for e in (m.a, m.b):
            if abs(e) >= b.strands:
                raise MoveError(f"letter {e} out of range for {b.strands} strands")
        w.insert(m.i, m.a)
        w.insert(m.j, m.b)
        return b.with_letters(w)
    idx = (m.i,) if m.j is None else (m.i, m.j)
    for p in idx:
        if not 0 <= p < L:
            raise MoveError(f"position {p} out of range for length {L}")
    if m.kind == CROSSING_CHANGE:
        w[m.i] = -w[m.i]
    elif m.kind == SWITCH:
        if (w[m.i] > 0) == (w[m.j] > 0):
            raise MoveError("a switch needs letters of opposite sign")
        w[m.i], w[m.j] = -w[m.i], -w[m.j]
    else:
        del w[m.j]
        del w[m.i]
    return b.with_letters(w)


def apply_move(b: BraidWord, m: ConcordanceMove) -> BraidWord:
    """Rewrite the word; the closure of the result must be a knot."""
    out = _rewrite(b, m)
    if not is_knot(out):
        raise MoveError(f"{m} produces a link")
    return out


def inverse_move(b: BraidWord, m: ConcordanceMove) -> ConcordanceMove:
    """Move taking ``apply_move(b, m)`` back to ``b``."""
    if m.kind in (CROSSING_CHANGE, SWITCH):
        return m
    if m.kind == RESOLVE:
        return ConcordanceMove.deresolve(m.i, b.letters[m.i], m.j, b.letters[m.j])
    return ConcordanceMove.resolve(m.i, m.j)


K12N512_DERESOLUTION = ConcordanceMove.deresolve(64, -8, 65, -1)


def apply_deresolution_k12n512(b: BraidWord) -> BraidWord:
    """Append (-8, -1) to the 64-letter braid of K12n512."""
    if len(b) != 64 or b.strands != 11:
        raise MoveError("expected the 64-letter 11-strand braid")
    return apply_move(b, K12N512_DERESOLUTION)


@dataclass
class EnumerationStats:
    crossing_changes: int = 0
    switches: int = 0
    resolutions_tried: int = 0
    resolutions_kept: int = 0
    deresolutions_tried: int = 0
    deresolutions_kept: int = 0

    def to_json(self) -> dict:
        return dict(self.__dict__)


def sample_deresolutions(b: BraidWord, samples: int, seed) -> list[ConcordanceMove]:
    """Seeded insertion moves: slot pair uniform over the (L+1)(L+2)/2
    unordered slot choices, letters uniform over +-{1..n-1}."""
    if b.strands < 2:
        return []
    rng = random.Random(seed)
    L = len(b)
    slots = [(p, q) for p in range(L + 1) for q in range(p, L + 1)]
    n = b.strands
    out = []
    for _ in range(samples):
        p, q = rng.choice(slots)
        a = rng.choice((-1, 1)) * rng.randint(1, n - 1)
        c = rng.choice((-1, 1)) * rng.randint(1, n - 1)
        # inserting at p first shifts the second slot by one
        out.append(ConcordanceMove.deresolve(p, a, q + 1, c))
    return out


def enumerate_moves(
    b: BraidWord,
    kinds: Sequence[str] = ALL_KINDS,
    sample_budget: int = DEFAULT_DERES_SAMPLES,
    seed=0,
    stats: EnumerationStats | None = None,
) -> Iterator[tuple[ConcordanceMove, BraidWord]]:
    """All crossing changes, sign-valid switches and knot-preserving
    resolutions, then ``sample_budget`` seeded de-resolutions.

    Every candidate is counted in ``stats``; only those whose closure is a
    knot are yielded.  Sign changes keep the closure permutation, so on a
    link input they are counted but never yielded.
    """
    if stats is None:
        stats = EnumerationStats()
    w = b.letters
    L = len(w)
    knot = is_knot(b)
    if CROSSING_CHANGE in kinds:
        for i in range(L):
            stats.crossing_changes += 1
            m = ConcordanceMove.crossing_change(i)
            if knot:
                yield m, _rewrite(b, m)
    if SWITCH in kinds:
        for i, j in combinations(range(L), 2):
            if (w[i] > 0) != (w[j] > 0):
                stats.switches += 1
                m = ConcordanceMove.switch(i, j)
                if knot:
                    yield m, _rewrite(b, m)
    if RESOLVE in kinds:
        for i, j in combinations(range(L), 2):
            stats.resolutions_tried += 1
            m = ConcordanceMove.resolve(i, j)
            out = _rewrite(b, m)
            if is_knot(out):
                stats.resolutions_kept += 1
                yield m, out
    if DERESOLVE in kinds:
        for m in sample_deresolutions(b, sample_budget, seed):
            stats.deresolutions_tried += 1
            out = _rewrite(b, m)
            if is_knot(out):
                stats.deresolutions_kept += 1
                yield m, out


# -- diagrams ------------------------------------------------------------------


def _smooth(d: Diagram, cs: Sequence[int]) -> Diagram:
    """Oriented smoothing at the given crossings; raises on a link."""
    parent: dict[int, int] = {a: a for a in d.heads}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    for c in cs:
        x = d.crossings[c]
        # join each incoming slot to the outgoing slot on its counterclockwise side
        if d.over_in[c] == 3:
            union(x[0], x[1])
            union(x[3], x[2])
        else:
            union(x[0], x[3])
            union(x[1], x[2])
    keep = [c for c in range(d.n_crossings) if c not in set(cs)]
    xs = [tuple(find(a) for a in d.crossings[c]) for c in keep]
    oi = [d.over_in[c] for c in keep]
    used = {a for x in xs for a in x}
    free_loops = {find(a) for a in d.heads} - used
    if not xs:
        if len(free_loops) != 1:
            raise MoveError("resolution produces a link")
        return Diagram((), ())
    if free_loops:
        raise MoveError("resolution produces a link")
    out = Diagram(xs, oi)
    if not out.is_knot():
        raise MoveError("resolution produces a link")
    return out.canonical()


def pd_apply_move(x: Diagram | PDCode, m: ConcordanceMove) -> Diagram:
    """Crossing change, switch or resolution on a diagram (crossing ids)."""
    d = Diagram.from_pd(x) if isinstance(x, PDCode) else x
    if m.kind == DERESOLVE:
        raise MoveError("de-resolution is not defined on diagrams")
    idx = (m.i,) if m.j is None else (m.i, m.j)
    for c in idx:
        if not 0 <= c < d.n_crossings:
            raise MoveError(f"crossing {c} out of range for {d.n_crossings} crossings")
    if m.kind == CROSSING_CHANGE:
        return d.change_crossings([m.i]).canonical()
    if m.kind == SWITCH:
        if d.sign(m.i) == d.sign(m.j):
            raise MoveError("a switch needs crossings of opposite sign")
        return d.change_crossings([m.i, m.j]).canonical()
    try:
        return _smooth(d, idx)
    except DiagramError as exc:
        raise MoveError(str(exc)) from exc


def enumerate_pd_moves(
    d: Diagram,
    kinds: Sequence[str] = PD_KINDS,
    stats: EnumerationStats | None = None,
) -> Iterator[tuple[ConcordanceMove, Diagram]]:
    """Every crossing change, sign-valid switch and knot-preserving resolution."""
    if stats is None:
        stats = EnumerationStats()
    n = d.n_crossings
    if CROSSING_CHANGE in kinds:
        for c in range(n):
            stats.crossing_changes += 1
            m = ConcordanceMove.crossing_change(c)
            yield m, pd_apply_move(d, m)
    if SWITCH in kinds:
        for i, j in combinations(range(n), 2):
            if d.sign(i) != d.sign(j):
                stats.switches += 1
                m = ConcordanceMove.switch(i, j)
                yield m, pd_apply_move(d, m)
    if RESOLVE in kinds:
        for i, j in combinations(range(n), 2):
            stats.resolutions_tried += 1
            m = ConcordanceMove.resolve(i, j)
            try:
                out = pd_apply_move(d, m)
            except MoveError:
                continue
            stats.resolutions_kept += 1
            yield m, out


def diff_words(before: BraidWord, after: BraidWord) -> list[ConcordanceMove]:
    """Every single move turning ``before`` into ``after`` (several when equal
    adjacent letters make the deleted positions ambiguous)."""
    u, v = before.letters, after.letters
    out = []
    if len(u) == len(v):
        diff = [k for k in range(len(u)) if u[k] != v[k]]
        if all(u[k] == -v[k] for k in diff):
            if len(diff) == 1:
                out.append(ConcordanceMove.crossing_change(diff[0]))
            elif len(diff) == 2 and (u[diff[0]] > 0) != (u[diff[1]] > 0):
                out.append(ConcordanceMove.switch(*diff))
    elif len(u) == len(v) + 2:
        for i, j in combinations(range(len(u)), 2):
            if u[:i] + u[i + 1:j] + u[j + 1:] == v:
                out.append(ConcordanceMove.resolve(i, j))
    elif len(v) == len(u) + 2:
        for i, j in combinations(range(len(v)), 2):
            if v[:i] + v[i + 1:j] + v[j + 1:] == u:
                out.append(ConcordanceMove.deresolve(i, v[i], j, v[j]))
    return out
