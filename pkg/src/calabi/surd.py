"""Exact arithmetic in a real quadratic field Q(sqrt(D)).

Cone weights solving the Bach-flatness quadratic are generally of the form
alpha + beta*sqrt(D) with rational alpha, beta.  Carrying them exactly lets
Bach-flatness and end conditions be checked with zero tolerance instead of
against a decimal approximation.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

import mpmath

__all__ = ["Surd", "sqrt_rat", "to_mpf"]


def _rat(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"expected rational, got {type(v).__name__}")


def _square_part(n: int) -> tuple[int, int]:
    """Write n = k^2 * r with small square factors pulled out; returns (k, r)."""
    k = 1
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        while n % (p * p) == 0:
            n //= p * p
            k *= p
    r = isqrt(n)
    if r * r == n:
        return k * r, 1
    return k, n


def sqrt_rat(v) -> "Fraction | Surd":
    """Exact square root of a non-negative rational."""
    v = _rat(v)
    if v < 0:
        raise ValueError("square root of a negative rational")
    if v == 0:
        return Fraction(0)
    num, den = v.numerator, v.denominator
    # sqrt(n/d) = sqrt(n*d)/d
    k, rad = _square_part(num * den)
    coeff = Fraction(k, den)
    if rad == 1:
        return coeff
    return Surd(Fraction(0), coeff, rad)


class Surd:
    """alpha + beta*sqrt(rad) with rational alpha, beta and square-free-ish integer rad > 1.

    Operations with a Surd of a different radicand raise; arithmetic that
    lands back in Q returns a plain Fraction.
    """

    __slots__ = ("alpha", "beta", "rad")

    def __init__(self, alpha, beta, rad: int):
        if rad <= 1:
            raise ValueError("radicand must exceed 1")
        self.alpha = _rat(alpha)
        self.beta = _rat(beta)
        self.rad = int(rad)

    @staticmethod
    def _make(alpha: Fraction, beta: Fraction, rad: int):
        if beta == 0:
            return alpha
        return Surd(alpha, beta, rad)

    def _parts(self, other):
        if isinstance(other, Surd):
            if other.rad != self.rad:
                raise ValueError(f"incompatible radicands {self.rad} and {other.rad}")
            return other.alpha, other.beta
        o = _rat(other)
        return o, Fraction(0)

    def __add__(self, other):
        try:
            a, b = self._parts(other)
        except TypeError:
            return NotImplemented
        return self._make(self.alpha + a, self.beta + b, self.rad)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.alpha, -self.beta, self.rad)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            a, b = self._parts(other)
        except TypeError:
            return NotImplemented
        return self._make(self.alpha - a, self.beta - b, self.rad)

    def __rsub__(self, other):
        try:
            a, b = self._parts(other)
        except TypeError:
            return NotImplemented
        return self._make(a - self.alpha, b - self.beta, self.rad)

    def __mul__(self, other):
        try:
            a, b = self._parts(other)
        except TypeError:
            return NotImplemented
        return self._make(
            self.alpha * a + self.beta * b * self.rad,
            self.alpha * b + self.beta * a,
            self.rad,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "Surd":
        return Surd(self.alpha, -self.beta, self.rad)

    def norm(self) -> Fraction:
        return self.alpha * self.alpha - self.beta * self.beta * self.rad

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("Surd division by zero")
        return Surd(self.alpha / n, -self.beta / n, self.rad)

    def __truediv__(self, other):
        if isinstance(other, Surd):
            return self * other.inverse()
        try:
            o = _rat(other)
        except TypeError:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError("Surd division by zero")
        return self._make(self.alpha / o, self.beta / o, self.rad)

    def __rtruediv__(self, other):
        try:
            o = _rat(other)
        except TypeError:
            return NotImplemented
        return self.inverse() * o

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = Fraction(1)
        base = self
        while n:
            if n & 1:
                result = base * result
            base = base * base
            n >>= 1
        return result

    def sign(self) -> int:
        """Exact sign of alpha + beta*sqrt(rad)."""
        sa = (self.alpha > 0) - (self.alpha < 0)
        sb = (self.beta > 0) - (self.beta < 0)
        if sa == 0:
            return sb
        if sb == 0 or sa == sb:
            return sa
        # opposite signs: compare alpha^2 with beta^2 * rad
        diff = self.alpha * self.alpha - self.beta * self.beta * self.rad
        return sa if diff > 0 else -sa

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other) -> int:
        d = self - other
        if isinstance(d, Surd):
            return d.sign()
        return (d > 0) - (d < 0)

    def __eq__(self, other):
        if isinstance(other, Surd):
            return (self.alpha, self.beta, self.rad) == (other.alpha, other.beta, other.rad)
        if isinstance(other, (int, Fraction)):
            return False  # beta != 0 by construction
        return NotImplemented

    def __hash__(self):
        return hash((self.alpha, self.beta, self.rad))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self):
        return float(to_mpf(self))

    def floor_bounds(self) -> tuple[Fraction, Fraction]:
        """Rational bracket lo <= self <= hi of width at most 1."""
        r = isqrt(self.rad)
        s_lo, s_hi = Fraction(r), Fraction(r + 1)
        if self.beta >= 0:
            return self.alpha + self.beta * s_lo, self.alpha + self.beta * s_hi
        return self.alpha + self.beta * s_hi, self.alpha + self.beta * s_lo

    def __repr__(self):
        return f"Surd({self.alpha}, {self.beta}, {self.rad})"

    def __str__(self):
        parts = []
        if self.alpha != 0:
            parts.append(str(self.alpha))
        b = self.beta
        sign = "-" if b < 0 else "+"
        mag = abs(b)
        term = f"sqrt({self.rad})" if mag == 1 else f"{mag}*sqrt({self.rad})"
        if parts:
            parts.append(f" {sign} {term}")
        else:
            parts.append(term if sign == "+" else f"-{term}")
        return "".join(parts)


def to_mpf(v):
    """High-precision real value of a Fraction, int, Surd or mpf."""
    if isinstance(v, Surd):
        return mpmath.mpf(v.alpha.numerator) / v.alpha.denominator + (
            mpmath.mpf(v.beta.numerator) / v.beta.denominator
        ) * mpmath.sqrt(v.rad)
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)
