"""Planar knot diagrams and their PD / DT serializations.

A crossing is a 4-tuple of arc labels listed counterclockwise starting from
the incoming under-strand, as in KnotTheory's ``X[a,b,c,d]``.  The over
strand enters either at slot 3 (positive crossing) or at slot 1 (negative).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx

from . import linalg
from .braid import BraidWord, is_knot
from .poly import LaurentPoly

Crossing = tuple[int, int, int, int]


class DiagramError(ValueError):
    """Inconsistent or unusable diagram data."""


class NotRealizableError(DiagramError):
    """DT code with no planar realization."""


# -- serialized codes ------------------------------------------------------


@dataclass(frozen=True)
class PDCode:
    crossings: tuple[Crossing, ...]

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(tuple(int(a) for a in x) for x in self.crossings))
        for x in self.crossings:
            if len(x) != 4:
                raise DiagramError(f"crossing {x} does not have four arcs")
        counts: dict[int, int] = {}
        for x in self.crossings:
            for a in x:
                counts[a] = counts.get(a, 0) + 1
        bad = sorted(a for a, c in counts.items() if c != 2)
        if bad:
            raise DiagramError(f"arc labels {bad} do not occur exactly twice")

    def __len__(self):
        return len(self.crossings)

    def __str__(self):
        return "\n".join("X[" + ",".join(map(str, x)) + "]" for x in self.crossings)


_PD_X = re.compile(r"X\[([^\]]*)\]")
_INT_LIST = re.compile(r"\[\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*\]")


def parse_pd(text: str) -> PDCode:
    """Parse ``X[a,b,c,d]`` lines (or a nested list ``[[a,b,c,d],...]``)."""
    groups = _PD_X.findall(text)
    if not groups:
        body = text.strip()
        if body.startswith("PD"):
            body = body[2:]
        if body in ("", "[]", "[ ]"):
            return PDCode(())
        groups = [m.group(1) or "" for m in _INT_LIST.finditer(body[1:-1] if body.startswith("[[") else body)]
        if not groups:
            raise DiagramError(f"cannot parse PD code {text!r}")
    try:
        crossings = [tuple(int(tok) for tok in g.split(",")) for g in groups]
    except ValueError as exc:
        raise DiagramError(f"malformed PD entry in {text!r}") from exc
    return PDCode(tuple(crossings))


@dataclass(frozen=True)
class DTCode:
    """Dowker-Thistlethwaite code: entry k is the signed even partner of odd label 2k+1.

    An even entry is negative exactly when the even-labelled pass is the
    under-strand at that crossing.
    """

    entries: tuple[int, ...]

    def __post_init__(self):
        ent = tuple(int(e) for e in self.entries)
        object.__setattr__(self, "entries", ent)
        n = len(ent)
        for e in ent:
            if e == 0 or e % 2:
                raise DiagramError(f"DT entry {e} is not a nonzero even number")
        got = sorted(abs(e) for e in ent)
        if got != list(range(2, 2 * n + 1, 2)):
            seen, dup = set(), set()
            for e in got:
                (dup if e in seen else seen).add(e)
            missing = sorted(set(range(2, 2 * n + 1, 2)) - seen)
            raise DiagramError(f"DT code has duplicate labels {sorted(dup)} / missing {missing}")

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        return "[" + ",".join(map(str, self.entries)) + "]"


def parse_dt(text: str) -> DTCode:
    m = re.fullmatch(r"\s*\[(.*)\]\s*", text, re.S)
    if not m:
        raise DiagramError(f"not a bracketed DT code: {text!r}")
    body = m.group(1).strip()
    if not body:
        return DTCode(())
    try:
        ent = tuple(int(tok) for tok in body.split(","))
    except ValueError as exc:
        raise DiagramError(f"malformed DT entry in {text!r}") from exc
    return DTCode(ent)


# -- diagrams ----------------------------------------------------------------


class Diagram:
    """Oriented diagram with arcs labelled 0..2n-1.

    ``over_in[c]`` is the slot (1 or 3) through which the over strand enters
    crossing ``c``.  Faces come from the rotation system: corner ``(c, k)``
    lies between slots k and k+1 counterclockwise.
    """

    __slots__ = ("crossings", "over_in", "__dict__")

    def __init__(self, crossings: Sequence[Sequence[int]], over_in: Sequence[int]):
        self.crossings: tuple[Crossing, ...] = tuple(tuple(x) for x in crossings)
        self.over_in: tuple[int, ...] = tuple(over_in)
        if len(self.crossings) != len(self.over_in):
            raise DiagramError("one over-strand direction per crossing is required")
        if any(s not in (1, 3) for s in self.over_in):
            raise DiagramError("over strand must enter at slot 1 or 3")
        self._index_arcs()

    def _index_arcs(self):
        heads: dict[int, tuple[int, int]] = {}
        tails: dict[int, tuple[int, int]] = {}
        for c, (x, oi) in enumerate(zip(self.crossings, self.over_in)):
            for s, a in enumerate(x):
                incoming = s == 0 or s == oi
                target = heads if incoming else tails
                if a in target:
                    raise DiagramError(f"arc {a} is oriented inconsistently")
                target[a] = (c, s)
        if set(heads) != set(tails):
            raise DiagramError("inconsistent arc incidences")
        self.heads = heads
        self.tails = tails

    # -- construction --------------------------------------------------
    @classmethod
    def from_pd(cls, pd: PDCode | str) -> Diagram:
        if isinstance(pd, str):
            pd = parse_pd(pd)
        xs = pd.crossings
        where: dict[int, list[tuple[int, int]]] = {}
        for c, x in enumerate(xs):
            for s, a in enumerate(x):
                where.setdefault(a, []).append((c, s))
        over_in: list[int | None] = [None] * len(xs)

        def other_end(a, here):
            e0, e1 = where[a]
            return e1 if e0 == here else e0

        # orient over strands by walking each component from an under-outgoing arc
        visited_arcs: set[int] = set()
        starts = [(c, 2) for c in range(len(xs))]
        for c0, s0 in starts:
            a0 = xs[c0][s0]
            if a0 in visited_arcs:
                continue
            c, s = c0, s0
            while True:
                a = xs[c][s]
                if a in visited_arcs:
                    break
                visited_arcs.add(a)
                c, s = other_end(a, (c, s))
                if s == 0:
                    s = 2
                elif s == 2:
                    raise DiagramError(f"arc {a} leaves two under-strands")
                else:
                    if over_in[c] is not None and over_in[c] != s:
                        raise DiagramError(f"over strand at crossing {c} oriented both ways")
                    over_in[c] = s
                    s = 3 if s == 1 else 1
        if any(o is None for o in over_in):
            raise DiagramError("a component has no under-crossing; orientation undetermined")
        return cls(xs, over_in).canonical()

    def canonical(self) -> Diagram:
        """Relabel arcs 0..2n-1 along the orientation, component by component,
        starting from the smallest current label."""
        mapping: dict[int, int] = {}
        nxt = 0
        for start in sorted(self.heads):
            a = start
            while a not in mapping:
                mapping[a] = nxt
                nxt += 1
                a = self.next_arc(a)
        xs = [tuple(mapping[a] for a in x) for x in self.crossings]
        return Diagram(xs, self.over_in)

    # -- basic structure -------------------------------------------------
    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_arcs(self) -> int:
        return len(self.heads)

    def sign(self, c: int) -> int:
        return 1 if self.over_in[c] == 3 else -1

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(1 if o == 3 else -1 for o in self.over_in)

    def writhe(self) -> int:
        return sum(self.signs)

    def next_arc(self, a: int) -> int:
        """Arc following ``a`` along the orientation."""
        c, s = self.heads[a]
        return self.crossings[c][(s + 2) % 4]

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        out = []
        for start in sorted(self.heads):
            if start in seen:
                continue
            comp = []
            a = start
            while a not in seen:
                seen.add(a)
                comp.append(a)
                a = self.next_arc(a)
            out.append(comp)
        return out

    def n_components(self) -> int:
        return len(self.components()) if self.crossings else 1

    def is_knot(self) -> bool:
        return self.n_components() == 1

    def visits(self) -> list[tuple[int, bool]]:
        """(crossing, passes_under) in traversal order starting at the head of arc 0."""
        if not self.crossings:
            return []
        if not self.is_knot():
            raise DiagramError("traversal is defined for knots only")
        out = []
        a = 0
        for _ in range(self.n_arcs):
            c, s = self.heads[a]
            out.append((c, s == 0))
            a = self.next_arc(a)
        return out

    # -- faces -------------------------------------------------------------
    @cached_property
    def _slot_of(self) -> dict[tuple[int, int], tuple[int, int]]:
        """(c, s) -> the other end (c', s') of the arc sitting in slot s."""
        out = {}
        for a in self.heads:
            h, t = self.heads[a], self.tails[a]
            out[h] = t
            out[t] = h
        return out

    @cached_property
    def faces(self) -> list[tuple[tuple[int, int], ...]]:
        """Faces as cycles of corners; corner (c, k) sits between slots k and k+1."""
        if not self.crossings:
            return [(), ()]
        other = self._slot_of
        seen: set[tuple[int, int]] = set()
        out = []
        for c in range(self.n_crossings):
            for k in range(4):
                if (c, k) in seen:
                    continue
                face = []
                cur = (c, k)
                while cur not in seen:
                    seen.add(cur)
                    face.append(cur)
                    cc, kk = cur
                    cur = other[(cc, (kk + 1) % 4)]
                out.append(tuple(face))
        return out

    @cached_property
    def face_of_corner(self) -> dict[tuple[int, int], int]:
        return {corner: f for f, face in enumerate(self.faces) for corner in face}

    def euler_characteristic(self) -> int:
        return self.n_crossings - self.n_arcs + len(self.faces)

    def is_planar(self) -> bool:
        return not self.crossings or self.euler_characteristic() == 2 * self.n_components_graph()

    def n_components_graph(self) -> int:
        """Connected components of the underlying 4-valent graph."""
        parent = list(range(self.n_crossings))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in self.heads:
            parent[find(self.heads[a][0])] = find(self.tails[a][0])
        return len({find(c) for c in range(self.n_crossings)})

    # -- transformations ---------------------------------------------------
    def to_pd(self) -> PDCode:
        return PDCode(tuple(tuple(a + 1 for a in x) for x in self.crossings))

    def mirror(self) -> Diagram:
        return self.change_crossings(range(self.n_crossings))

    def change_crossings(self, cs: Iterable[int]) -> Diagram:
        xs = list(self.crossings)
        oi = list(self.over_in)
        for c in set(cs):
            x = xs[c]
            if oi[c] == 3:
                xs[c] = (x[3], x[0], x[1], x[2])
                oi[c] = 1
            else:
                xs[c] = (x[1], x[2], x[3], x[0])
                oi[c] = 3
        return Diagram(xs, oi)

    def reduced(self) -> Diagram:
        """Remove Reidemeister I kinks until none are left."""
        d = self
        while True:
            kink = None
            for c, x in enumerate(d.crossings):
                for s in range(4):
                    if x[s] == x[(s + 1) % 4]:
                        kink = c
                        break
                if kink is not None:
                    break
            if kink is None:
                return d
            d = d._remove_kink(kink)

    def _remove_kink(self, c: int) -> Diagram:
        x = self.crossings[c]
        loop = next(x[s] for s in range(4) if x[s] == x[(s + 1) % 4])
        rest = [a for a in x if a != loop]
        if len(rest) != 2:
            # the whole diagram is this single kinked crossing
            return Diagram((), ())
        a_in = next(a for a in rest if self.heads[a][0] == c)
        a_out = next(a for a in rest if self.tails[a][0] == c)
        xs = []
        oi = []
        for k, (y, o) in enumerate(zip(self.crossings, self.over_in)):
            if k == c:
                continue
            xs.append(tuple(a_in if a == a_out else a for a in y))
            oi.append(o)
        return Diagram(xs, oi).canonical()

    # -- equality --------------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, Diagram)
            and self.crossings == other.crossings
            and self.over_in == other.over_in
        )

    def __hash__(self):
        return hash((self.crossings, self.over_in))

    def __repr__(self):
        return f"Diagram({self.n_crossings} crossings, writhe {self.writhe()})"

    # -- invariants ------------------------------------------------------
    def alexander(self) -> LaurentPoly:
        """Alexander polynomial from a Wirtinger-style presentation on over-arcs."""
        from .invariants import NotAKnotError, _checked

        if not self.is_knot():
            raise NotAKnotError("diagram is not a knot")
        d = self.reduced()
        n = d.n_crossings
        if n == 0:
            return LaurentPoly([1])
        parent = list(range(d.n_arcs))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for x in d.crossings:
            parent[find(x[1])] = find(x[3])
        roots = sorted({find(a) for a in range(d.n_arcs)})
        idx = {r: i for i, r in enumerate(roots)}
        if len(roots) != n:
            raise DiagramError("over-arc count differs from crossing count")
        t = LaurentPoly([0, 1])
        one = LaurentPoly([1])
        M = [[LaurentPoly() for _ in range(n)] for _ in range(n)]
        for r, (x, o) in enumerate(zip(d.crossings, d.over_in)):
            k = idx[find(x[1])]
            i = idx[find(x[0])]
            j = idx[find(x[2])]
            if o == 3:
                # x_j = t x_i + (1 - t) x_k
                M[r][i] = M[r][i] + t
                M[r][k] = M[r][k] + (one - t)
                M[r][j] = M[r][j] - one
            else:
                # x_i = t x_j + (1 - t) x_k
                M[r][j] = M[r][j] + t
                M[r][k] = M[r][k] + (one - t)
                M[r][i] = M[r][i] - one
        minor = [row[1:] for row in M[1:]]
        return _checked(linalg.poly_det(minor))


# -- braid closures --------------------------------------------------------


def braid_to_diagram(b: BraidWord) -> Diagram:
    """Closed-braid diagram with every strand oriented upward."""
    if not is_knot(b):
        from .invariants import NotAKnotError

        raise NotAKnotError("braid closure is not a knot")
    if not b.letters:
        return Diagram((), ())
    counter = iter(range(10**9))
    bottom = [next(counter) for _ in range(b.strands)]
    current = list(bottom)
    raw: list[tuple[tuple[int, int, int, int], int]] = []
    for e in b.letters:
        i = abs(e) - 1
        left_in, right_in = current[i], current[i + 1]
        left_out, right_out = next(counter), next(counter)
        if e > 0:
            # over strand runs SW -> NE, under strand SE -> NW
            raw.append(((right_in, right_out, left_out, left_in), 3))
        else:
            # over strand runs SE -> NW, under strand SW -> NE
            raw.append(((left_in, right_in, right_out, left_out), 1))
        current[i], current[i + 1] = left_out, right_out
    ident = {top: bot for top, bot in zip(current, bottom)}
    # strands untouched by any letter would leave free circles; a knot has none
    xs = [tuple(ident.get(a, a) for a in x) for x, _ in raw]
    return Diagram(xs, [o for _, o in raw]).canonical()


def braid_to_pd(b: BraidWord) -> PDCode:
    return braid_to_diagram(b).to_pd()


def pd_to_diagram(pd: PDCode) -> Diagram:
    return Diagram.from_pd(pd)


def diagram_to_pd(d: Diagram) -> PDCode:
    return d.to_pd()


# -- DT codes ----------------------------------------------------------------


def extract_dt(d: Diagram) -> DTCode:
    """DT code read off along the orientation starting at the head of arc 0."""
    vis = d.visits()
    first: dict[int, int] = {}
    pairs: dict[int, int] = {}
    under_at: dict[int, bool] = {}
    for label, (c, under) in enumerate(vis, start=1):
        if c in first:
            other = first[c]
            if (label - other) % 2 == 0:
                raise DiagramError("crossing visited twice with the same parity")
            odd, even = (other, label) if other % 2 else (label, other)
            pairs[odd] = even
            under_at[even] = under if label == even else not under
        else:
            first[c] = label
    entries = []
    for odd in range(1, 2 * d.n_crossings, 2):
        even = pairs[odd]
        entries.append(-even if under_at[even] else even)
    return DTCode(tuple(entries))


def _gauss_from_dt(dt: DTCode) -> tuple[list[int], dict[int, int]]:
    """crossing id of each visit (1-based list index 0..2n-1) and under-visit per crossing."""
    n = len(dt)
    at = [0] * (2 * n)
    under: dict[int, int] = {}
    for k, e in enumerate(dt.entries):
        odd, even = 2 * k + 1, abs(e)
        at[odd - 1] = k
        at[even - 1] = k
        under[k] = even if e < 0 else odd
    return at, under


def realize_dt(dt: DTCode | str) -> Diagram:
    """Planar diagram for a DT code.

    Planarity (with every crossing forced to pass straight through) is decided
    on the graph obtained by replacing each crossing with a rigid wheel.  The
    wheel's rotation in the embedding fixes the crossing sign.  Among the two
    mirror-image embeddings, the one where the crossing met first is entered
    by the odd strand and then crossed from its right by the even strand
    (counterclockwise order odd-in, even-out, odd-out, even-in) is returned.
    """
    if isinstance(dt, str):
        dt = parse_dt(dt)
    n = len(dt)
    if n == 0:
        return Diagram((), ())
    at, under_visit = _gauss_from_dt(dt)
    L = 2 * n
    # visit v (0-based, DT label v+1) enters through arc v and leaves through arc v+1
    visits_of: dict[int, list[int]] = {}
    for v, c in enumerate(at):
        visits_of.setdefault(c, []).append(v)

    g = nx.Graph()
    rim = {}
    for c, (v1, v2) in visits_of.items():
        hub = ("hub", c)
        ends = {}
        for v in (v1, v2):
            ends[(v, "in")] = ("rim", c, v, "in")
            ends[(v, "out")] = ("rim", c, v, "out")
        cycle = [ends[(v1, "in")], ends[(v2, "in")], ends[(v1, "out")], ends[(v2, "out")]]
        for k in range(4):
            g.add_edge(cycle[k], cycle[(k + 1) % 4])
            g.add_edge(hub, cycle[k])
        rim[c] = ends
    for a in range(L):
        tail = rim[at[(a - 1) % L]][((a - 1) % L, "out")]
        head = rim[at[a]][(a, "in")]
        mid = ("arc", a)
        g.add_edge(tail, mid)
        g.add_edge(mid, head)
    planar, emb = nx.check_planarity(g)
    if not planar:
        raise NotRealizableError(f"DT code {dt} has no planar realization")

    def ccw_order(c):
        cw = list(emb.neighbors_cw_order(("hub", c)))
        return cw[::-1]

    # orientation flag for the first crossing decides the mirror choice
    c0 = at[0]
    v1, v2 = visits_of[c0]
    order = ccw_order(c0)
    pos = {node: k for k, node in enumerate(order)}
    e = rim[c0]
    reflect = (pos[e[(v2, "out")]] - pos[e[(v1, "in")]]) % 4 != 1

    xs = []
    over_in = []
    for c in range(n):
        v1, v2 = visits_of[c]
        u = under_visit[c] - 1
        o = v2 if u == v1 else v1
        order = ccw_order(c)
        if reflect:
            order = order[::-1]
        ends = rim[c]
        label = {
            ends[(u, "in")]: ("ui", u),
            ends[(u, "out")]: ("uo", (u + 1) % L),
            ends[(o, "in")]: ("oi", o),
            ends[(o, "out")]: ("oo", (o + 1) % L),
        }
        start = order.index(ends[(u, "in")])
        seq = [label[order[(start + k) % 4]] for k in range(4)]
        if seq[2][0] != "uo":
            raise DiagramError("embedding does not pass straight through a crossing")
        xs.append(tuple(arc for _, arc in seq))
        over_in.append(3 if seq[3][0] == "oi" else 1)
    d = Diagram(xs, over_in)
    if not d.is_planar():
        raise NotRealizableError(f"DT code {dt} realized with wrong Euler characteristic")
    return d


def dt_is_prime_like(dt: DTCode) -> bool:
    """True when the interlacement graph is connected once isolated
    (nugatory) crossings are dropped, so the realized knot is unique up to
    reflection."""
    n = len(dt)
    if n <= 1:
        return True
    at, _ = _gauss_from_dt(dt)
    span = {}
    for v, c in enumerate(at):
        span.setdefault(c, []).append(v)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for a in range(n):
        a0, a1 = span[a]
        for b in range(a + 1, n):
            b0, b1 = span[b]
            if (a0 < b0 < a1) != (a0 < b1 < a1):
                g.add_edge(a, b)
    g.remove_nodes_from([v for v in list(g) if g.degree(v) == 0])
    return g.number_of_nodes() == 0 or nx.is_connected(g)
