"""Truncated Taylor jets in two variables with exact rational coefficients.

A jet of order k at a point stores the Taylor coefficients c[i, j] of
(dx1)^i (dx2)^j for i + j <= k.  Products truncate, so every identity that
only needs derivatives up to order k is evaluated exactly.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial


@lru_cache(maxsize=None)
def _index(k: int):
    monos = [(i, d - i) for d in range(k + 1) for i in range(d, -1, -1)]
    pos = {mono: n for n, mono in enumerate(monos)}
    # pairs of positions whose product lands inside the truncation
    table = []
    for u, (i1, j1) in enumerate(monos):
        for v, (i2, j2) in enumerate(monos):
            if i1 + j1 + i2 + j2 <= k:
                table.append((u, v, pos[(i1 + i2, j1 + j2)]))
    return tuple(monos), pos, tuple(table)


class Jet:
    __slots__ = ("k", "c")

    def __init__(self, k: int, coeffs):
        self.k = k
        self.c = coeffs

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, k: int, v) -> "Jet":
        monos, _, _ = _index(k)
        c = [Fraction(0)] * len(monos)
        c[0] = Fraction(v)
        return cls(k, c)

    @classmethod
    def variable(cls, k: int, axis: int, at) -> "Jet":
        j = cls.const(k, at)
        if k >= 1:
            _, pos, _ = _index(k)
            j.c[pos[(1, 0) if axis == 0 else (0, 1)]] = Fraction(1)
        return j

    # arithmetic -------------------------------------------------------
    def _lift(self, o) -> "Jet":
        return o if isinstance(o, Jet) else Jet.const(self.k, o)

    def truncate(self, k: int) -> "Jet":
        if k == self.k:
            return self
        monos, _, _ = _index(k)
        return Jet(k, self.c[: len(monos)])

    def __add__(self, o):
        o = self._lift(o)
        if o.k != self.k:
            k = min(o.k, self.k)
            return self.truncate(k) + o.truncate(k)
        return Jet(self.k, [u + v for u, v in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.k, [-u for u in self.c])

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        if not isinstance(o, Jet):
            o = Fraction(o)
            return Jet(self.k, [u * o for u in self.c])
        if o.k != self.k:
            k = min(o.k, self.k)
            return self.truncate(k) * o.truncate(k)
        _, _, table = _index(self.k)
        out = [Fraction(0)] * len(self.c)
        a, b = self.c, o.c
        for u, v, w in table:
            if a[u] and b[v]:
                out[w] += a[u] * b[v]
        return Jet(self.k, out)

    __rmul__ = __mul__

    def inverse(self) -> "Jet":
        c0 = self.c[0]
        if c0 == 0:
            raise ZeroDivisionError("jet with zero value is not invertible")
        h = (self - c0) * (-1 / c0)  # 1/(c0 + e) = (1/c0) sum (-e/c0)^n
        acc = Jet.const(self.k, 1)
        term = Jet.const(self.k, 1)
        for _ in range(self.k):
            term = term * h
            acc = acc + term
        return acc * (1 / c0)

    def __truediv__(self, o):
        if isinstance(o, Jet):
            return self * o.inverse()
        return self * (1 / Fraction(o))

    def __rtruediv__(self, o):
        return self.inverse() * o

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Jet.const(self.k, 1)
        for _ in range(n):
            out = out * self
        return out

    # calculus ---------------------------------------------------------
    def d(self, axis: int) -> "Jet":
        """Partial derivative in x1 (axis 0) or x2 (axis 1); order drops by one."""
        if self.k == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        monos, _, _ = _index(self.k)
        _, pos_lo, _ = _index(self.k - 1)
        out = [Fraction(0)] * len(pos_lo)
        for n, (i, j) in enumerate(monos):
            if axis == 0 and i > 0:
                out[pos_lo[(i - 1, j)]] += i * self.c[n]
            elif axis == 1 and j > 0:
                out[pos_lo[(i, j - 1)]] += j * self.c[n]
        return Jet(self.k - 1, out)

    @property
    def value(self) -> Fraction:
        return self.c[0]

    def derivative(self, i: int, j: int) -> Fraction:
        """The partial derivative d^{i+j} / dx1^i dx2^j at the base point."""
        _, pos, _ = _index(self.k)
        return self.c[pos[(i, j)]] * factorial(i) * factorial(j)

    def is_zero(self) -> bool:
        return not any(self.c)

    def __repr__(self):
        return f"Jet(k={self.k}, value={self.c[0]})"


def zero(k: int) -> Jet:
    return Jet.const(k, 0)


def compose_poly(coeffs, t: Jet) -> Jet:
    """Evaluate a polynomial with ascending rational coefficients at a jet (Horner)."""
    acc = Jet.const(t.k, 0)
    for c in reversed(list(coeffs)):
        acc = acc * t + c
    return acc
