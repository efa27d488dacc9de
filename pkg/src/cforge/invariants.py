"""Exact knot invariants and the identification fingerprint.

Braids go through the Burau representation (Alexander) and the canonical
braid-closure Seifert surface (signature); diagrams go through a Wirtinger
Alexander matrix and the Goeritz/Gordon-Litherland route.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache

from . import linalg
from .braid import BraidWord, is_knot
from .poly import LaurentPoly

T = LaurentPoly([0, 1])
ONE = LaurentPoly([1])
ZERO = LaurentPoly()
T_INV = LaurentPoly([1], -1)

JONES_CROSSING_BUDGET = 30


class NotAKnotError(ValueError):
    """The input closes up to a link with more than one component."""


class InvariantError(ArithmeticError):
    """An internal consistency check failed (signals a bug upstream)."""


# -- braid route -------------------------------------------------------------


def _seifert_loops(b: BraidWord) -> list[tuple[int, int, int, int]]:
    loops = []
    for i in range(1, b.strands):
        ps = [p for p, e in enumerate(b.letters) if abs(e) == i]
        for k in range(len(ps) - 1):
            loops.append((i, ps[k], ps[k + 1], k))
    return loops


def seifert_matrix(b: BraidWord) -> list[list[int]]:
    """Seifert matrix of the surface made of one disk per strand and one
    half-twisted band per letter.

    The basis is one loop per pair of consecutive bands in the same column.
    """
    if not is_knot(b):
        raise NotAKnotError("braid closure is not a knot")
    sign = [1 if e > 0 else -1 for e in b.letters]
    loops = _seifert_loops(b)
    index = {(i, k): a for a, (i, _, _, k) in enumerate(loops)}
    by_column: dict[int, list[int]] = {}
    for a, (i, *_rest) in enumerate(loops):
        by_column.setdefault(i, []).append(a)
    m = len(loops)
    V = [[0] * m for _ in range(m)]
    for a, (i, p, q, k) in enumerate(loops):
        V[a][a] = -(sign[p] + sign[q]) // 2
        nxt = index.get((i, k + 1))
        if nxt is not None:
            e = sign[q]
            V[a][nxt] = (e + 1) // 2
            V[nxt][a] = (e - 1) // 2
        for c in by_column.get(i + 1, ()):
            _, r, s, _ = loops[c]
            if p < r < q < s:
                V[a][c] = -1
            elif r < p < s < q:
                V[a][c] = 1
    return V


def _burau_generator(k: int, e: int) -> dict[tuple[int, int], LaurentPoly]:
    """Nonidentity entries of the reduced Burau matrix of sigma_|e|^(+-1)."""
    i = abs(e) - 1
    out = {}
    if e > 0:
        out[(i, i)] = -T
        if i - 1 >= 0:
            out[(i - 1, i)] = T
        if i + 1 < k:
            out[(i + 1, i)] = ONE
    else:
        out[(i, i)] = -T_INV
        if i - 1 >= 0:
            out[(i - 1, i)] = ONE
        if i + 1 < k:
            out[(i + 1, i)] = T_INV
    return out


def burau_matrix(b: BraidWord) -> list[list[LaurentPoly]]:
    """Reduced Burau image of the word, (n-1) x (n-1)."""
    k = b.strands - 1
    M = [[ONE if r == c else ZERO for c in range(k)] for r in range(k)]
    for e in b.letters:
        i = abs(e) - 1
        gen = _burau_generator(k, e)
        # right multiplication only rewrites column i
        col = [ZERO] * k
        for (r, c), v in gen.items():
            if c == i:
                for row in range(k):
                    if not M[row][r].is_zero():
                        col[row] = col[row] + M[row][r] * v
        for row in range(k):
            M[row][i] = col[row]
    return M


def alexander_burau(b: BraidWord) -> LaurentPoly:
    """Alexander polynomial via (1 - t) det(I - B(t)) / (1 - t^n)."""
    if not is_knot(b):
        raise NotAKnotError("braid closure is not a knot")
    n = b.strands
    if n == 1:
        return ONE
    M = burau_matrix(b)
    k = n - 1
    A = [[(ONE if r == c else ZERO) - M[r][c] for c in range(k)] for r in range(k)]
    num = linalg.poly_det(A) * (ONE - T)
    return _checked(num.exact_div(ONE - LaurentPoly([1], n)))


def alexander_seifert(V: list[list[int]]) -> LaurentPoly:
    """det(V - t V^T), normalized."""
    m = len(V)
    if m == 0:
        return ONE
    A = [[LaurentPoly([V[i][j], -V[j][i]]) for j in range(m)] for i in range(m)]
    return _checked(linalg.poly_det(A))


def signature_from_seifert(V: list[list[int]]) -> int:
    S = [[V[i][j] + V[j][i] for j in range(len(V))] for i in range(len(V))]
    return linalg.signature(S)


def braid_signature(b: BraidWord) -> int:
    return signature_from_seifert(seifert_matrix(b))


def _checked(p: LaurentPoly) -> LaurentPoly:
    p = p.normalized()
    if p(1) not in (1, -1):
        raise InvariantError(f"Alexander polynomial {p} has |value at 1| != 1")
    return p


def determinant(alex: LaurentPoly) -> int:
    return abs(int(alex(-1)))


# -- fingerprint -------------------------------------------------------------


@dataclass(frozen=True)
class InvariantFingerprint:
    alexander: LaurentPoly
    signature: int
    determinant: int
    jones: LaurentPoly | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.determinant != abs(int(self.alexander(-1))):
            raise InvariantError("determinant does not match the Alexander polynomial")

    @property
    def key(self) -> tuple:
        return (self.alexander, self.signature, self.determinant)

    def mirror(self) -> InvariantFingerprint:
        jones = self.jones.substitute_inverse() if self.jones is not None else None
        return InvariantFingerprint(self.alexander, -self.signature, self.determinant, jones)

    def with_jones(self, jones: LaurentPoly) -> InvariantFingerprint:
        return replace(self, jones=jones)

    def as_tuple(self) -> tuple:
        return (str(self.alexander), self.signature, self.determinant,
                None if self.jones is None else str(self.jones))

    def to_json(self) -> dict:
        return {
            "alexander": str(self.alexander),
            "signature": self.signature,
            "determinant": self.determinant,
            "jones": None if self.jones is None else str(self.jones),
        }


def alexander(x) -> LaurentPoly:
    from .diagram import Diagram

    if isinstance(x, BraidWord):
        return alexander_burau(x)
    if isinstance(x, Diagram):
        return x.alexander()
    raise TypeError(f"cannot compute the Alexander polynomial of {type(x).__name__}")


def signature(x) -> int:
    from .diagram import Diagram
    from .goeritz import gl_signature

    if isinstance(x, BraidWord):
        return braid_signature(x)
    if isinstance(x, Diagram):
        return gl_signature(x)
    raise TypeError(f"cannot compute the signature of {type(x).__name__}")


def fingerprint(x, with_jones: bool = False) -> InvariantFingerprint:
    """Alexander polynomial, signature and determinant (Jones on request)."""
    alex = alexander(x)
    fp = InvariantFingerprint(alex, signature(x), determinant(alex))
    if with_jones:
        fp = fp.with_jones(jones(x))
    return fp


def jones(x) -> LaurentPoly:
    from .diagram import Diagram, braid_to_diagram

    if isinstance(x, BraidWord):
        x = braid_to_diagram(x)
    if not isinstance(x, Diagram):
        from .diagram import PDCode

        if isinstance(x, PDCode):
            x = Diagram.from_pd(x)
        else:
            raise TypeError(f"cannot compute the Jones polynomial of {type(x).__name__}")
    return _jones_cached(x.reduced())


@lru_cache(maxsize=4096)
def _jones_cached(d) -> LaurentPoly:
    from .bracket import jones_polynomial

    if d.n_crossings > JONES_CROSSING_BUDGET:
        raise InvariantError(
            f"{d.n_crossings} crossings exceed the Jones budget of {JONES_CROSSING_BUDGET}"
        )
    return jones_polynomial(d)
