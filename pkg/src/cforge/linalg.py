"""Exact integer and polynomial matrix routines."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .poly import LaurentPoly, interpolate

Matrix = list[list[int]]


class NotSymmetricError(ValueError):
    pass


def is_symmetric(m: Sequence[Sequence[int]]) -> bool:
    n = len(m)
    return all(len(row) == n for row in m) and all(
        m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n)
    )


def check_symmetric(m: Sequence[Sequence[int]]) -> None:
    if not is_symmetric(m):
        raise NotSymmetricError("matrix is not square and symmetric")


def transpose(m: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*m)] if m else []


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination with row pivoting."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (akk * rowi[j] - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def leading_minors(m: Sequence[Sequence[int]]) -> list[int]:
    """All leading principal minors, via Bareiss without pivoting."""
    n = len(m)
    a = [list(map(int, row)) for row in m]
    out = []
    prev = 1
    for k in range(n):
        akk = a[k][k]
        out.append(akk)
        if akk == 0:
            # fall back to direct evaluation for the remaining minors
            out.extend(det([row[: j + 1] for row in m[: j + 1]]) for j in range(k + 1, n))
            return out
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = (akk * a[i][j] - aik * a[k][j]) // prev
        prev = akk
    return out


def positive_definite(m: Sequence[Sequence[int]]) -> bool:
    """Sylvester's criterion in exact arithmetic; raises on non-symmetric input."""
    check_symmetric(m)
    return all(x > 0 for x in leading_minors(m))


def inertia(m: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric rational matrix.

    Symmetric Gaussian elimination over the rationals; a zero diagonal with a
    nonzero off-diagonal entry is repaired by the congruence row_i += row_j.
    """
    check_symmetric(m)
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(
                ((i, j) for i in active for j in active if i != j and a[i][j] != 0), None
            )
            if pair is None:
                break
            i, j = pair
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        rowp = a[piv]
        for i in active:
            f = a[i][piv] / p
            if f:
                rowi = a[i]
                for j in active:
                    rowi[j] -= f * rowp[j]
    return pos, neg, n - pos - neg


def signature(m: Sequence[Sequence[int]]) -> int:
    pos, neg, _ = inertia(m)
    return pos - neg


def _normalize_lines(m):
    """Shift each row to start at exponent 0; returns (rows, shift, degree bound)."""
    shift = 0
    degree = 0
    rows = []
    for row in m:
        nonzero = [p for p in row if not p.is_zero()]
        if not nonzero:
            return None, 0, 0
        lo = min(p.low for p in nonzero)
        hi = max(p.high for p in nonzero)
        shift += lo
        degree += hi - lo
        rows.append([p.shift(-lo) for p in row])
    return rows, shift, degree


def poly_det(m: Sequence[Sequence[LaurentPoly]]) -> LaurentPoly:
    """Determinant of a Laurent-polynomial matrix by evaluation and interpolation.

    Rows or columns (whichever gives the smaller degree bound) are shifted to
    be honest polynomials first.
    """
    n = len(m)
    if n == 0:
        return LaurentPoly([1])
    rows, rshift, rdeg = _normalize_lines(m)
    if rows is None:
        return LaurentPoly()
    cols, cshift, cdeg = _normalize_lines(transpose(m))
    if cdeg < rdeg:
        rows, shift, degree = cols, cshift, cdeg
    else:
        shift, degree = rshift, rdeg
    points = [(-1) ** k * ((k + 1) // 2) for k in range(degree + 1)]
    values = [det([[p(x) for p in row] for row in rows]) for x in points]
    return interpolate(points, values).shift(shift)
