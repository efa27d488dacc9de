from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cforge import linalg
from cforge.poly import LaurentPoly, interpolate, parse_poly

coeffs = st.lists(st.integers(-20, 20), min_size=0, max_size=7)
lows = st.integers(-5, 5)
polys = st.builds(LaurentPoly, coeffs, lows)


def test_text_form_is_descending():
    p = LaurentPoly([2, -5, 2])
    assert str(p) == "2*t^2 - 5*t + 2"
    assert str(LaurentPoly([1, 1, 0, -1], -4)) == "-t^-1 + t^-3 + t^-4"
    assert str(LaurentPoly()) == "0"


def test_normalized_form():
    p = LaurentPoly([-1, 1, -1], -1).normalized()
    assert p.low == 0 and p.coeffs[-1] > 0
    assert p == parse_poly("t^2 - t + 1")


@given(polys)
def test_parse_roundtrip(p):
    assert parse_poly(str(p)) == p


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - a).is_zero()


@given(polys, polys)
def test_exact_division(a, b):
    if b.is_zero():
        return
    assert (a * b).exact_div(b) == a


def test_inexact_division_raises():
    with pytest.raises(ArithmeticError):
        LaurentPoly([1, 0, 1]).exact_div(LaurentPoly([1, 1]))


@given(st.lists(st.integers(-30, 30), min_size=1, max_size=8))
def test_interpolation_recovers_integer_polynomials(c):
    p = LaurentPoly(c)
    pts = list(range(-(len(c) // 2), len(c) - len(c) // 2))
    assert interpolate(pts, [p(x) for x in pts]) == p


def test_interpolation_rejects_non_integral_data():
    with pytest.raises(ArithmeticError):
        interpolate([0, 2], [0, 1])


def test_det_against_cofactor_expansion():
    rng = random.Random(3)

    def cofactor(m):
        if len(m) == 1:
            return m[0][0]
        return sum((-1) ** j * m[0][j] * cofactor([r[:j] + r[j + 1:] for r in m[1:]]) for j in range(len(m)))

    for _ in range(60):
        n = rng.randint(1, 5)
        m = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        assert linalg.det(m) == cofactor(m)


@given(st.lists(st.integers(-3, 3), min_size=9, max_size=9))
def test_signature_and_inertia(vals):
    a = [vals[0:3], vals[3:6], vals[6:9]]
    s = linalg.matmul(linalg.transpose(a), a)
    pos, neg, zero = linalg.inertia(s)
    assert neg == 0
    assert pos + zero == 3
    assert linalg.positive_definite(s) == (linalg.det(a) != 0)
    neg_s = [[-x for x in r] for r in s]
    assert linalg.signature(neg_s) == -linalg.signature(s)


def test_poly_det_matches_pointwise_det():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(1, 4)
        m = [[LaurentPoly([rng.randint(-2, 2) for _ in range(3)], rng.randint(-1, 0)) for _ in range(n)]
             for _ in range(n)]
        d = linalg.poly_det(m)
        for x in (2, 3, -3):
            num = [[e(Fraction(x)) for e in r] for r in m]
            assert d(Fraction(x)) == _fraction_det(num)


def _fraction_det(m):
    m = [[Fraction(v) for v in r] for r in m]
    n = len(m)
    out = Fraction(1)
    for i in range(n):
        p = next((r for r in range(i, n) if m[r][i] != 0), None)
        if p is None:
            return Fraction(0)
        if p != i:
            m[i], m[p] = m[p], m[i]
            out = -out
        out *= m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] / m[i][i]
            m[r] = [a - f * b for a, b in zip(m[r], m[i])]
    return out


def test_symmetry_check():
    with pytest.raises(linalg.NotSymmetricError):
        linalg.check_symmetric([[1, 2], [3, 1]])
