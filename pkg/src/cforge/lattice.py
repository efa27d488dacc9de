"""Integer factorizations G = M^T M of positive-definite Gram matrices.

The search places the columns of M one at a time.  Each new column is only
enumerated up to the signed coordinate permutations that fix every column
already placed, so an ``Exhausted`` answer covers the whole of Z^n.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from math import isqrt
from typing import Iterator, Sequence

from . import linalg

WITNESS = "Witness"
EXHAUSTED = "Exhausted"
INCONCLUSIVE = "Inconclusive"


class BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class EmbeddingProblem:
    gram: tuple[tuple[int, ...], ...]
    dim: int

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        linalg.check_symmetric([list(r) for r in g])
        if self.dim < 1:
            raise ValueError(f"target dimension must be positive, got {self.dim}")
        if g and not linalg.positive_definite([list(r) for r in g]):
            raise ValueError("Gram matrix is not positive definite")

    @classmethod
    def for_knot(cls, gram, signature: int) -> EmbeddingProblem:
        """Problem of size m x (m - signature) for a knot with signature <= 0."""
        if signature > 0:
            raise ValueError("signature must be nonpositive")
        return cls(gram, len(gram) - signature)

    @property
    def size(self) -> int:
        return len(self.gram)


@dataclass(frozen=True)
class EmbeddingCertificate:
    outcome: str
    nodes: int
    wall_ms: float
    witness: tuple[tuple[int, ...], ...] | None = None
    symmetry_classes: int = 0
    reason: str = ""

    @property
    def is_witness(self) -> bool:
        return self.outcome == WITNESS

    @property
    def is_exhausted(self) -> bool:
        return self.outcome == EXHAUSTED

    def to_json(self) -> dict:
        out = {"outcome": self.outcome, "nodes": self.nodes, "wall_ms": round(self.wall_ms, 3)}
        if self.witness is not None:
            out["witness"] = [list(r) for r in self.witness]
        if self.outcome == EXHAUSTED:
            out["symmetry_classes"] = self.symmetry_classes
        if self.reason:
            out["reason"] = self.reason
        return out


def verify_witness(M: Sequence[Sequence[int]], G: Sequence[Sequence[int]]) -> bool:
    """Exact check of M^T M == G for an n x m matrix M."""
    m = len(G)
    if any(len(row) != m for row in M):
        return False
    for i in range(m):
        for j in range(m):
            if sum(row[i] * row[j] for row in M) != G[i][j]:
                return False
    return True


# -- symmetry classes ----------------------------------------------------------


def _coordinate_classes(placed: list[list[int]], dim: int) -> tuple[list[list[tuple[int, int]]], list[int]]:
    """Split coordinates by their profile across placed columns, up to sign.

    Returns (classes, zeros): each class lists (coordinate, orientation) where
    orientation makes the profile's first nonzero entry positive; ``zeros``
    are coordinates unused so far (free signs and permutations).
    """
    groups: dict[tuple[int, ...], list[tuple[int, int]]] = {}
    zeros = []
    for i in range(dim):
        prof = tuple(v[i] for v in placed)
        lead = next((x for x in prof if x), 0)
        if lead == 0:
            zeros.append(i)
            continue
        s = 1 if lead > 0 else -1
        key = tuple(s * x for x in prof)
        groups.setdefault(key, []).append((i, s))
    classes = [groups[k] for k in sorted(groups, reverse=True)]
    return classes, zeros


def _square_partitions(norm: int, parts: int, cap: int | None = None) -> Iterator[list[int]]:
    """Non-increasing positive integers, at most ``parts`` of them, with squares
    summing to ``norm``."""
    if norm == 0:
        yield []
        return
    if parts == 0:
        return
    top = isqrt(norm) if cap is None else min(cap, isqrt(norm))
    for x in range(top, 0, -1):
        rest = norm - x * x
        # remaining parts are each <= x, so rest <= (parts-1) * x^2
        if rest > (parts - 1) * x * x:
            break
        for tail in _square_partitions(rest, parts - 1, x):
            yield [x, *tail]


def enumerate_norm_vectors(
    norm: int,
    dim: int,
    constraints: Sequence[tuple[Sequence[int], int]] = (),
    canonical: bool = True,
) -> Iterator[tuple[int, ...]]:
    """Vectors v in Z^dim with v.v = norm and v.u = c for each (u, c).

    With ``canonical`` set, only one representative per orbit of the signed
    permutations fixing every constraint vector is produced.
    """
    if norm < 0:
        return
    placed = [list(u) for u, _ in constraints]
    targets = [c for _, c in constraints]
    if not canonical:
        yield from _raw_vectors(norm, dim, placed, targets)
        return
    classes, zeros = _coordinate_classes(placed, dim)
    yield from _canonical_vectors(norm, dim, placed, targets, classes, zeros, None)


def _raw_vectors(norm, dim, placed, targets):
    r = isqrt(norm)
    for v in itertools.product(range(-r, r + 1), repeat=dim):
        if sum(x * x for x in v) != norm:
            continue
        if all(sum(a * b for a, b in zip(u, v)) == c for u, c in zip(placed, targets)):
            yield v


def _canonical_vectors(norm, dim, placed, targets, classes, zeros, counter):
    """Core enumerator.  ``counter`` (a one-element list) is bumped per
    coordinate assignment so the caller can enforce a node budget."""
    order: list[int] = []
    orient: list[int] = []
    first_in_class: list[bool] = []
    for cls in classes:
        for k, (i, s) in enumerate(cls):
            order.append(i)
            orient.append(s)
            first_in_class.append(k == 0)
    L = len(order)
    k = len(placed)
    # suffix sums of squares of each placed column over the ordered coordinates
    suffix = [[0] * (L + 1) for _ in range(k)]
    for j in range(k):
        u = placed[j]
        acc = 0
        for p in range(L - 1, -1, -1):
            acc += u[order[p]] ** 2
            suffix[j][p] = acc
    cols = [[placed[j][order[p]] for j in range(k)] for p in range(L)]
    nz = len(zeros)
    v = [0] * dim
    resid = list(targets)

    def feasible(p: int, rem: int) -> bool:
        for j in range(k):
            r = resid[j]
            if r:
                s = suffix[j][p]
                if r * r > rem * s:
                    return False
        return True

    def rec(p: int, rem: int, prev_w: int):
        if counter is not None:
            counter[0] += 1
            if counter[0] > counter[1]:
                raise BudgetExceeded
        if p == L:
            if any(resid):
                return
            for part in _square_partitions(rem, nz):
                for idx, z in enumerate(zeros):
                    v[z] = part[idx] if idx < len(part) else 0
                yield tuple(v)
            for z in zeros:
                v[z] = 0
            return
        i = order[p]
        s = orient[p]
        c = cols[p]
        top = isqrt(rem)
        hi = top if first_in_class[p] else min(top, prev_w)
        for w in range(hi, -top - 1, -1):
            x = s * w
            sq = x * x
            if sq > rem:
                continue
            v[i] = x
            if x:
                for j in range(k):
                    resid[j] -= x * c[j]
            if feasible(p + 1, rem - sq):
                yield from rec(p + 1, rem - sq, w)
            if x:
                for j in range(k):
                    resid[j] += x * c[j]
            v[i] = 0

    if not feasible(0, norm):
        return
    yield from rec(0, norm, 0)


# -- the search ----------------------------------------------------------------


def column_order(G: Sequence[Sequence[int]], strategy: str = "connected") -> list[int]:
    """Order in which columns are placed.

    ``diagonal`` sorts by descending diagonal entry.  ``connected`` starts from
    the largest diagonal entry and then prefers columns with the most nonzero
    inner products against columns already placed, so that each new column is
    tightly constrained.
    """
    m = len(G)
    if strategy == "diagonal":
        return sorted(range(m), key=lambda i: (-G[i][i], i))
    if strategy != "connected":
        raise ValueError(f"unknown column order {strategy!r}")
    if m == 0:
        return []
    order = [max(range(m), key=lambda i: (G[i][i], -i))]
    left = set(range(m)) - set(order)
    while left:
        nxt = max(
            left,
            key=lambda i: (sum(1 for j in order if G[i][j]), sum(abs(G[i][j]) for j in order), G[i][i], -i),
        )
        order.append(nxt)
        left.remove(nxt)
    return order


def _search(G, n, order, budget_nodes, deadline):
    """Backtracking over columns.

    With ``order`` a list the columns are placed in that fixed order.  With
    ``order=None`` every unplaced column is enumerated at each step (forward
    checking): a column with no candidate kills the branch, and the search
    branches on the column with the fewest candidates.
    """
    m = len(G)
    counter = [0, budget_nodes if budget_nodes is not None else float("inf")]
    placed: list[list[int]] = []
    placed_cols: list[int] = []
    classes_seen = [0]

    def candidates(col, classes, zeros, cap=None):
        targets = [G[col][c] for c in placed_cols]
        gen = _canonical_vectors(G[col][col], n, placed, targets, classes, zeros, counter)
        if cap is None:
            return list(gen)
        return list(itertools.islice(gen, cap))

    def rec(t: int):
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded
        if t == m:
            return True
        classes, zeros = _coordinate_classes(placed, n)
        if order is not None:
            col = order[t]
            cands = candidates(col, classes, zeros)
        else:
            col, cands = None, None
            for c in range(m):
                if c in placed_cols:
                    continue
                cs = candidates(c, classes, zeros, _MRV_CAP)
                if not cs:
                    return False
                if cands is None or len(cs) < len(cands):
                    col, cands = c, cs
            if len(cands) == _MRV_CAP:
                cands = candidates(col, classes, zeros)
        for vec in cands:
            if t == 0:
                classes_seen[0] += 1
            placed.append(list(vec))
            placed_cols.append(col)
            if rec(t + 1):
                return True
            placed.pop()
            placed_cols.pop()
        return False

    found = rec(0)
    witness = None
    if found:
        M = [[0] * m for _ in range(n)]
        for vec, col in zip(placed, placed_cols):
            for r in range(n):
                M[r][col] = vec[r]
        witness = tuple(tuple(row) for row in M)
    return found, witness, counter[0], classes_seen[0]


_MRV_CAP = 64


def embeds(
    G: Sequence[Sequence[int]],
    n: int,
    budget_nodes: int | None = None,
    budget_seconds: float | None = None,
    order: str = "adaptive",
) -> EmbeddingCertificate:
    """Decide whether G = M^T M for some integer n x m matrix M.

    Returns a Witness (verified exactly), Exhausted when the complete search
    found nothing, or Inconclusive when a budget ran out first.
    """
    prob = EmbeddingProblem(G, n)
    G = [list(r) for r in prob.gram]
    start = time.monotonic()
    deadline = start + budget_seconds if budget_seconds is not None else None
    m = len(G)
    if m == 0:
        return EmbeddingCertificate(WITNESS, 0, 0.0, witness=tuple(() for _ in range(n)))
    cols = None if order == "adaptive" else column_order(G, order)
    try:
        found, witness, nodes, classes = _search(G, n, cols, budget_nodes, deadline)
    except BudgetExceeded:
        wall = (time.monotonic() - start) * 1000
        nodes = budget_nodes if budget_nodes is not None else 0
        return EmbeddingCertificate(INCONCLUSIVE, nodes, wall, reason="budget exceeded")
    wall = (time.monotonic() - start) * 1000
    if found:
        if not verify_witness(witness, G):
            raise AssertionError("solver produced an invalid witness")
        return EmbeddingCertificate(WITNESS, nodes, wall, witness=witness)
    return EmbeddingCertificate(EXHAUSTED, nodes, wall, symmetry_classes=classes)


def brute_force_embeds(G: Sequence[Sequence[int]], n: int) -> tuple[tuple[int, ...], ...] | None:
    """Reference search with no symmetry reduction; only for tiny inputs."""
    m = len(G)
    cols: list[tuple[int, ...]] = []

    def rec(t):
        if t == m:
            return True
        for v in _raw_vectors(G[t][t], n, cols, [G[t][s] for s in range(t)]):
            cols.append(v)
            if rec(t + 1):
                return True
            cols.pop()
        return False

    if not rec(0):
        return None
    return tuple(tuple(cols[c][r] for c in range(m)) for r in range(n))


# -- 4-genus bound -------------------------------------------------------------


@dataclass(frozen=True)
class GenusBound:
    bound: int
    signature: int
    source: str
    gram: tuple[tuple[int, ...], ...] | None = None
    certificate: EmbeddingCertificate | None = field(default=None, compare=False)

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "signature": self.signature,
            "source": self.source,
            "gram": None if self.gram is None else [list(r) for r in self.gram],
            "certificate": None if self.certificate is None else self.certificate.to_json(),
        }


def g4_lower_bound(x, signature: int | None = None, budget_nodes: int | None = None,
                   budget_seconds: float | None = None) -> GenusBound:
    """Lower bound on the smooth 4-genus.

    ``x`` is a Diagram, or a Gram matrix together with ``signature``.  The
    bound is |sigma|/2, raised by one when a positive-definite Goeritz form
    fails to embed in Z^(m - sigma).  Signs are arranged so that sigma <= 0,
    mirroring the diagram if needed.
    """
    from .diagram import Diagram

    if isinstance(x, Diagram):
        from .goeritz import gl_signature, positive_definite_representatives

        sig = gl_signature(x)
        base = abs(sig) // 2
        reps = positive_definite_representatives(x)
        if not reps:
            return GenusBound(base, sig, "signature (no positive-definite Goeritz form)")
        best = None
        for form, s in reps:
            cert = embeds(form.matrix, form.size - s, budget_nodes, budget_seconds)
            if cert.is_exhausted:
                return GenusBound(base + 1, sig, "embedding obstruction", form.matrix, cert)
            if best is None or cert.outcome == INCONCLUSIVE:
                best = (form, cert)
        form, cert = best
        return GenusBound(base, sig, f"signature (embedding {cert.outcome})", form.matrix, cert)
    if signature is None:
        raise ValueError("a Gram matrix needs its knot signature")
    if signature > 0:
        raise ValueError("signature must be nonpositive for the embedding obstruction")
    G = tuple(tuple(r) for r in x)
    base = -signature // 2
    cert = embeds(G, len(G) - signature, budget_nodes, budget_seconds)
    if cert.is_exhausted:
        return GenusBound(base + 1, signature, "embedding obstruction", G, cert)
    return GenusBound(base, signature, f"signature (embedding {cert.outcome})", G, cert)
