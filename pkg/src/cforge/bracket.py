"""Kauffman bracket and Jones polynomial by sequential crossing elimination.

Crossings are absorbed one at a time.  A partial state is the perfect
matching it induces on the arcs still open at the boundary; states with equal
matchings are merged, so the work is governed by the boundary width rather
than by 2^n.
"""

from __future__ import annotations

from collections import defaultdict

from .diagram import Diagram
from .poly import LaurentPoly

# polynomials in A are kept as {exponent: coefficient}
_Poly = dict


def _crossing_order(d: Diagram) -> list[int]:
    """Greedy order: next crossing shares the most arcs with the open boundary."""
    n = d.n_crossings
    if n == 0:
        return []
    arcs_of = [set(x) for x in d.crossings]
    order = [0]
    used = {0}
    boundary: set[int] = set(arcs_of[0])
    while len(order) < n:
        best = max(
            (c for c in range(n) if c not in used),
            key=lambda c: (len(arcs_of[c] & boundary), -len(arcs_of[c] - boundary), -c),
        )
        order.append(best)
        used.add(best)
        boundary ^= arcs_of[best]
    return order


def _join(m: dict[int, int], x: int, y: int) -> int:
    """Add a strand x--y to matching ``m`` in place; return closed loops made."""
    if x == y:
        return 1
    if m.get(x) == y:
        del m[x]
        del m[y]
        return 1
    ex = m.pop(x, None)
    if ex is not None:
        del m[ex]
    else:
        ex = x
    ey = m.pop(y, None)
    if ey is not None:
        del m[ey]
    else:
        ey = y
    m[ex] = ey
    m[ey] = ex
    return 0


def _mul_loop(p: _Poly, loops: int) -> _Poly:
    # each closed loop multiplies by d = -A^2 - A^-2
    for _ in range(loops):
        q: _Poly = defaultdict(int)
        for e, c in p.items():
            q[e + 2] -= c
            q[e - 2] -= c
        p = {e: c for e, c in q.items() if c}
    return p


def kauffman_bracket(d: Diagram) -> _Poly:
    """Unnormalized bracket <D> as {power of A: coefficient}, with <O> = 1."""
    if d.n_crossings == 0:
        comps = d.n_components()
        return _mul_loop({0: 1}, max(comps - 1, 0))
    states: dict[tuple, _Poly] = {(): {0: 1}}
    for c in _crossing_order(d):
        a, b, cc, dd = d.crossings[c]
        nxt: dict[tuple, _Poly] = defaultdict(lambda: defaultdict(int))
        for key, poly in states.items():
            for shift, pairs in ((1, ((a, b), (cc, dd))), (-1, ((a, dd), (b, cc)))):
                m = dict(key_pairs(key))
                loops = sum(_join(m, x, y) for x, y in pairs)
                out = nxt[_key(m)]
                for e, coef in _mul_loop({e + shift: v for e, v in poly.items()}, loops).items():
                    out[e] += coef
        states = {k: {e: v for e, v in p.items() if v} for k, p in nxt.items()}
    total = states.get((), {})
    # the final closing loop is the normalization <O> = 1, so divide by d once
    return _div_loop(total)


def key_pairs(key: tuple) -> list[tuple[int, int]]:
    out = []
    for x, y in key:
        out.append((x, y))
        out.append((y, x))
    return out


def _key(m: dict[int, int]) -> tuple:
    return tuple(sorted((x, y) for x, y in m.items() if x < y))


def _div_loop(p: _Poly) -> _Poly:
    """Exact division by d = -A^2 - A^-2."""
    p = {e: c for e, c in p.items() if c}
    out: _Poly = {}
    while p:
        top = max(p)
        c = p[top]
        # quotient term -c A^(top-2); subtract d times it, i.e. c A^top + c A^(top-4)
        out[top - 2] = -c
        for e in (top, top - 4):
            p[e] = p.get(e, 0) - c
            if p[e] == 0:
                del p[e]
        if p and max(p) >= top:
            raise ArithmeticError("bracket not divisible by the loop value")
    return out


def jones_polynomial(d: Diagram) -> LaurentPoly:
    """Jones polynomial in t, with the right-handed trefoil giving t + t^3 - t^4."""
    br = kauffman_bracket(d)
    w = d.writhe()
    # (-A^3)^(-w) <D>, then A = t^(-1/4)
    sign = -1 if w % 2 else 1
    coeffs: dict[int, int] = {}
    for e, c in br.items():
        ea = e - 3 * w
        if ea % 4:
            raise ArithmeticError("Jones exponent not integral; input is not a knot")
        coeffs[-ea // 4] = coeffs.get(-ea // 4, 0) + sign * c
    lo = min(coeffs)
    hi = max(coeffs)
    return LaurentPoly([coeffs.get(k, 0) for k in range(lo, hi + 1)], lo)
