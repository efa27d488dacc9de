"""Integer Laurent polynomials in one variable ``t``."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping


class LaurentPoly:
    """Immutable Laurent polynomial with integer coefficients.

    Stored as the lowest exponent plus a dense coefficient tuple with
    nonzero first and last entries (the zero polynomial has no terms).
    """

    __slots__ = ("low", "coeffs")

    def __init__(self, coeffs: Iterable[int] = (), low: int = 0):
        c = [int(x) for x in coeffs]
        start = 0
        while start < len(c) and c[start] == 0:
            start += 1
        end = len(c)
        while end > start and c[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "coeffs", tuple(c[start:end]))
        object.__setattr__(self, "low", low + start if end > start else 0)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def from_dict(cls, terms: Mapping[int, int]) -> LaurentPoly:
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        return cls([terms.get(e, 0) for e in range(lo, hi + 1)], lo)

    @classmethod
    def constant(cls, c: int) -> LaurentPoly:
        return cls([c])

    @classmethod
    def monomial(cls, exponent: int, c: int = 1) -> LaurentPoly:
        return cls([c], exponent)

    # -- basic accessors -------------------------------------------------
    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self) -> dict[int, int]:
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c}

    def __call__(self, t):
        if not self.coeffs:
            return 0
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        if self.low >= 0:
            return acc * t ** self.low
        return Fraction(acc) / Fraction(t) ** (-self.low)

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        lo = min(self.low, other.low)
        hi = max(self.high, other.high)
        out = [0] * (hi - lo + 1)
        for i, c in enumerate(self.coeffs):
            out[self.low - lo + i] += c
        for i, c in enumerate(other.coeffs):
            out[other.low - lo + i] += c
        return LaurentPoly(out, lo)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly([-c for c in self.coeffs], self.low)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return LaurentPoly()
        a, b = self.coeffs, other.coeffs
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return LaurentPoly(out, self.low + other.low)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.coeffs) == 1 and abs(self.coeffs[0]) == 1:
                return LaurentPoly([self.coeffs[0] ** -k], self.low * k)
            raise ValueError("only units may be raised to negative powers")
        out = LaurentPoly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by ``t**k``."""
        return LaurentPoly(self.coeffs, self.low + k)

    def substitute_inverse(self) -> LaurentPoly:
        """Return p(1/t)."""
        return LaurentPoly(reversed(self.coeffs), -self.high) if self.coeffs else self

    def exact_div(self, other: LaurentPoly) -> LaurentPoly:
        """Divide exactly; raises ArithmeticError when a remainder is left."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        d = other.coeffs
        if len(rem) < len(d):
            if rem:
                raise ArithmeticError("polynomial division is not exact")
            return LaurentPoly()
        q = [0] * (len(rem) - len(d) + 1)
        lead = d[-1]
        for i in range(len(q) - 1, -1, -1):
            top = rem[i + len(d) - 1]
            if top % lead:
                raise ArithmeticError("polynomial division is not exact")
            f = top // lead
            q[i] = f
            if f:
                for j, c in enumerate(d):
                    rem[i + j] -= f * c
        if any(rem):
            raise ArithmeticError("polynomial division is not exact")
        return LaurentPoly(q, self.low - other.low)

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly([other])
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs and self.low == other.low

    def __hash__(self):
        return hash((self.low, self.coeffs))

    # -- normal forms ---------------------------------------------------
    def normalized(self) -> LaurentPoly:
        """Shift to lowest exponent 0 and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        sign = -1 if self.coeffs[-1] < 0 else 1
        return LaurentPoly([sign * c for c in self.coeffs], 0)

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in range(self.high, self.low - 1, -1):
            c = self.coeffs[e - self.low]
            if c == 0:
                continue
            if e == 0:
                mono = str(abs(c))
            else:
                mono = "t" if e == 1 else f"t^{e}"
                if abs(c) != 1:
                    mono = f"{abs(c)}*{mono}"
            if not parts:
                parts.append(("-" if c < 0 else "") + mono)
            else:
                parts.append(("- " if c < 0 else "+ ") + mono)
        return " ".join(parts)


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*(t(?:\^\(?(-?\d+)\)?)?)?")


def parse_poly(text: str) -> LaurentPoly:
    """Parse the canonical text form, e.g. ``2*t^2 - 5*t + 2`` or ``t^-1 + 1``."""
    s = text.replace(" ", "")
    if s in ("", "0"):
        return LaurentPoly()
    terms: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
        sign, digits, tpart, exp = m.groups()
        if not digits and not tpart:
            raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        e = 0
        if tpart:
            e = int(exp) if exp is not None else 1
        terms[e] = terms.get(e, 0) + c
        pos = m.end()
    return LaurentPoly.from_dict(terms)


def interpolate(points: list[int], values: list[int]) -> LaurentPoly:
    """Exact Newton interpolation of an integer polynomial through integer points.

    Divided differences of an integer polynomial at integer nodes are
    integers, so every division is exact; a remainder means the data does not
    come from an integer polynomial of the assumed degree.
    """
    n = len(points)
    table = [int(v) for v in values]
    coef = [table[0]]
    for level in range(1, n):
        nxt = []
        for i in range(n - level):
            q, r = divmod(table[i + 1] - table[i], points[i + level] - points[i])
            if r:
                raise ArithmeticError("interpolated polynomial is not integral")
            nxt.append(q)
        table = nxt
        coef.append(table[0])
    # expand Newton form into monomial coefficients
    out = [0] * n
    basis = [1]
    for k in range(n):
        ck = coef[k]
        if ck:
            for i, b in enumerate(basis):
                out[i] += ck * b
        if k < n - 1:
            x = points[k]
            nxt = [0] * (len(basis) + 1)
            for i, b in enumerate(basis):
                nxt[i + 1] += b
                nxt[i] -= x * b
            basis = nxt
    return LaurentPoly(out, 0)
