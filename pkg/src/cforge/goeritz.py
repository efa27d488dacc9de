"""Checkerboard colorings, Goeritz forms and the Gordon-Litherland signature."""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .diagram import Diagram, DiagramError


@dataclass(frozen=True)
class GoeritzForm:
    """Goeritz matrix of one checkerboard surface plus its correction term.

    ``signature(matrix) - correction`` is the knot signature.
    """

    matrix: tuple[tuple[int, ...], ...]
    correction: int
    coloring_id: int
    mirrored: bool = False

    @property
    def size(self) -> int:
        return len(self.matrix)

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.matrix]

    def knot_signature(self) -> int:
        return linalg.signature(self.as_lists()) - self.correction

    def determinant(self) -> int:
        return abs(linalg.det(self.as_lists()))

    def positive_definite(self) -> bool:
        return linalg.positive_definite(self.as_lists())


def checkerboard(d: Diagram) -> tuple[list[int], list[int]]:
    """Both 2-colorings of the faces, as lists of white face indices.

    Faces meeting across an arc get different colors; at a crossing corners
    0 and 2 share a color, as do corners 1 and 3.
    """
    faces = d.faces
    if not d.crossings:
        return [0], [1]
    if d.n_components_graph() != 1:
        raise DiagramError("checkerboard coloring needs a connected diagram")
    color = [None] * len(faces)
    fc = d.face_of_corner
    adj: dict[int, set[int]] = {f: set() for f in range(len(faces))}
    for c in range(d.n_crossings):
        for k in range(4):
            f, g = fc[(c, k)], fc[(c, (k + 1) % 4)]
            adj[f].add(g)
            adj[g].add(f)
    color[0] = 0
    stack = [0]
    while stack:
        f = stack.pop()
        for g in adj[f]:
            if g == f:
                raise DiagramError("face adjacent to itself; diagram not checkerboard colorable")
            if color[g] is None:
                color[g] = 1 - color[f]
                stack.append(g)
            elif color[g] == color[f]:
                raise DiagramError("faces do not admit a checkerboard coloring")
    white0 = [f for f in range(len(faces)) if color[f] == 0]
    white1 = [f for f in range(len(faces)) if color[f] == 1]
    return white0, white1


def _white_corners(d: Diagram, c: int, white: set[int]) -> tuple[int, int]:
    fc = d.face_of_corner
    if fc[(c, 1)] in white:
        return (1, 3)
    return (0, 2)


def crossing_data(d: Diagram, c: int, white: set[int]) -> tuple[int, bool]:
    """(incidence number, is_type_II) of crossing ``c`` for a white set.

    Rotating the over strand counterclockwise sweeps corners 1 and 3; the
    incidence is -1 when those corners are white and +1 otherwise.  The
    oriented smoothing merges corners 1 and 3 at a positive crossing and 0
    and 2 at a negative one; the crossing is type II when the white corners
    are the ones the smoothing keeps apart.  With these choices the right
    handed trefoil has signature -2.
    """
    wc = _white_corners(d, c, white)
    eta = -1 if wc == (1, 3) else 1
    merged = (1, 3) if d.sign(c) > 0 else (0, 2)
    return eta, wc != merged


def goeritz_matrix(d: Diagram, coloring: int | list[int] = 0, deleted: int | None = None) -> GoeritzForm:
    """Goeritz form of the white surface.

    ``coloring`` is 0 or 1 (index into :func:`checkerboard`) or an explicit
    white face list.  The deleted white region defaults to the one touching
    the most crossings.
    """
    colorings = checkerboard(d)
    if isinstance(coloring, int):
        cid = coloring
        white = colorings[coloring]
    else:
        white = list(coloring)
        cid = 0 if sorted(white) == sorted(colorings[0]) else 1
    if not d.crossings:
        return GoeritzForm((), 0, cid)
    wset = set(white)
    fc = d.face_of_corner
    idx = {f: i for i, f in enumerate(white)}
    m1 = len(white)
    full = [[0] * m1 for _ in range(m1)]
    mu = 0
    touches = [0] * m1
    for c in range(d.n_crossings):
        eta, type2 = crossing_data(d, c, wset)
        if type2:
            mu += eta
        k0, k1 = _white_corners(d, c, wset)
        f, g = idx[fc[(c, k0)]], idx[fc[(c, k1)]]
        touches[f] += 1
        if g != f:
            touches[g] += 1
            full[f][g] -= eta
            full[g][f] -= eta
    for i in range(m1):
        full[i][i] = -sum(full[i][j] for j in range(m1) if j != i)
    if deleted is None:
        deleted = max(range(m1), key=lambda i: (touches[i], -i))
    keep = [i for i in range(m1) if i != deleted]
    mat = tuple(tuple(full[i][j] for j in keep) for i in keep)
    return GoeritzForm(mat, mu, cid)


def gl_signature(d: Diagram) -> int:
    """Knot signature as sig(G) - mu; both colorings are computed and compared."""
    if not d.is_knot():
        from .invariants import NotAKnotError

        raise NotAKnotError("diagram is not a knot")
    if not d.crossings:
        return 0
    if d.n_components_graph() != 1:
        raise DiagramError("signature needs a connected diagram")
    s0 = goeritz_matrix(d, 0).knot_signature()
    s1 = goeritz_matrix(d, 1).knot_signature()
    if s0 != s1:
        from .invariants import InvariantError

        raise InvariantError(f"colorings disagree on the signature ({s0} vs {s1})")
    return s0


def positive_definite(G) -> bool:
    return linalg.positive_definite([list(r) for r in G])


def positive_definite_representatives(d: Diagram) -> list[tuple[GoeritzForm, int]]:
    """All (form, knot signature) pairs over both colorings of the diagram and its
    mirror whose Goeritz matrix is positive definite and whose knot has
    signature <= 0."""
    out = []
    for mirrored, dd in ((False, d), (True, d.mirror())):
        sig = gl_signature(dd)
        if sig > 0:
            continue
        for cid in (0, 1):
            form = goeritz_matrix(dd, cid)
            if form.size and form.positive_definite():
                out.append((GoeritzForm(form.matrix, form.correction, cid, mirrored), sig))
    return out


def parse_matrix(text: str) -> list[list[int]]:
    """Square integer matrix from CSV rows, whitespace rows, ``a & b \\\\``
    rows or parenthesized rows."""
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        for junk in ("\\\\", "(", ")", "[", "]"):
            line = line.replace(junk, " ")
        for sep in ("&", ",", ";"):
            line = line.replace(sep, " ")
        if line.strip():
            rows.append([int(t) for t in line.split()])
    if any(len(r) != len(rows) for r in rows):
        raise ValueError("matrix must be square")
    return rows
