"""Exact univariate polynomials, real-root isolation, resultants and identity checks.

Coefficients live in an exact ordered field: ``fractions.Fraction`` for almost
everything, :class:`calabi.surd.Surd` when a cone weight is a quadratic
irrationality.  No floating point enters any decision made here; mpmath is
used only to print refined approximations.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import mpmath

from .surd import Surd, sqrt_rat, to_mpf

__all__ = [
    "Poly",
    "RatFunc",
    "IsolatedRoot",
    "IdentityReport",
    "UndefinedRootsError",
    "parse_rat",
    "rat_str",
    "real_roots_above",
    "real_roots",
    "square_free_decomposition",
    "resultant",
    "discriminant",
    "identity_check",
    "default_tolerance",
    "simplest_between",
    "interval_eval",
]

DEFAULT_TOL = Fraction(1, 10**30)


class UndefinedRootsError(ValueError):
    """Root query on the zero polynomial."""


def default_tolerance() -> Fraction:
    """Refinement width, overridable through CALABI_PRECISION (e.g. ``1e-40`` or ``1/10**40``)."""
    env = os.environ.get("CALABI_PRECISION")
    if not env:
        return DEFAULT_TOL
    try:
        tol = parse_rat(env)
    except ValueError:
        return DEFAULT_TOL
    return tol if tol > 0 else DEFAULT_TOL


def parse_rat(text) -> Fraction:
    """Parse "p/q", an integer or a base-10 decimal exactly."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    if "**" in s:
        # tiny convenience for 1/10**40 style tolerances
        num, _, rest = s.partition("/")
        base, _, exp = rest.partition("**")
        return Fraction(int(num), int(base) ** int(exp))
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


def rat_str(v) -> str:
    """Canonical "num/den" text; den omitted when 1."""
    if isinstance(v, (Surd, Poly, RatFunc)):
        return str(v) if not isinstance(v, Poly) else f"({v})"
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def _coerce(c):
    if isinstance(c, (Fraction, Surd, Poly, RatFunc)):
        # Poly / RatFunc coefficients give exact bivariate algebra
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return parse_rat(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


def _sign(v) -> int:
    if isinstance(v, Surd):
        return v.sign()
    return (v > 0) - (v < 0)


class Poly:
    """Immutable polynomial, ascending coefficients, no trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_coerce(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "Poly":
        out = cls([lead])
        for r in roots:
            out = out * cls([-_coerce(r), 1])
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __call__(self, v):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, Surd)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly([other])

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self.coeff(i) + o.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if not self.coeffs or not o.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, c):
        if isinstance(c, Poly):
            q, r = divmod(self, c)
            if not r.is_zero():
                raise ValueError("inexact polynomial division")
            return q
        c = _coerce(c)
        return Poly(a / c for a in self.coeffs)

    def __divmod__(self, other):
        d = self._lift(other)
        if d.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dl = d.lc
        dd = d.degree
        if len(rem) - 1 < dd:
            return Poly(), Poly(rem)
        quo = [Fraction(0)] * (len(rem) - dd)
        for k in range(len(rem) - 1 - dd, -1, -1):
            c = rem[k + dd] / dl
            quo[k] = c
            if c != 0:
                for j, b in enumerate(d.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        return Poly(quo), Poly(rem[:dd])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self / self.lc

    def compose(self, inner: "Poly") -> "Poly":
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def shift(self, c) -> "Poly":
        """p(x + c)."""
        return self.compose(Poly([c, 1]))

    def scale(self, c) -> "Poly":
        """p(c x)."""
        c = _coerce(c)
        out = []
        f = Fraction(1)
        for a in self.coeffs:
            out.append(a * f)
            f = f * c
        return Poly(out)

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, self._lift(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def sign_at(self, v) -> int:
        return _sign(self(v))

    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def to_json(self) -> list[str]:
        return [rat_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "Poly":
        return cls(parse_rat(s) for s in data)

    def __repr__(self):
        return f"Poly({[rat_str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mon = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            cs = rat_str(c)
            if mon and c == 1:
                terms.append(mon)
            elif mon:
                terms.append(f"({cs})*{mon}")
            else:
                terms.append(cs)
        return " + ".join(reversed(terms))


# ---------------------------------------------------------------------------
# square-free decomposition and root isolation


def square_free_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: p = lc * prod f_i^i with f_i square-free and pairwise coprime."""
    if p.is_zero():
        raise UndefinedRootsError("undefined roots: zero polynomial")
    out: list[tuple[Poly, int]] = []
    if p.degree == 0:
        return out
    dp = p.derivative()
    a = p.gcd(dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        g = b.gcd(d)
        if g.degree > 0:
            out.append((g.monic(), i))
        b = b // g
        c = d // g
        d = c - b.derivative()
        i += 1
    return out


def _variations(cs: Sequence) -> int:
    last = 0
    n = 0
    for c in cs:
        s = _sign(c)
        if s == 0:
            continue
        if last and s != last:
            n += 1
        last = s
    return n


def _shift_coeffs(cs: list, c) -> list:
    """Taylor shift of a coefficient list: p(x + c)."""
    out = list(cs)
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] = out[j] + c * out[j + 1]
    return out


def _descartes(p: Poly, lo: Fraction, hi: Fraction) -> int:
    """Sign variations bounding the number of roots in the open interval (lo, hi)."""
    n = p.degree
    # g(s) = p(lo + (hi - lo) s), roots of g in (0,1)
    g = list(p.shift(lo).scale(hi - lo).coeffs)
    g += [Fraction(0)] * (n + 1 - len(g))
    rev = list(reversed(g))
    h = _shift_coeffs(rev, Fraction(1))
    return _variations(h)


def _cauchy_bound(p: Poly) -> Fraction:
    lc = p.lc
    m = Fraction(0)
    for c in p.coeffs[:-1]:
        v = abs(c / lc)
        if isinstance(v, Surd):
            v = v.floor_bounds()[1]
        if v > m:
            m = v
    return 1 + m


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in the closed interval [lo, hi] (lo <= hi)."""
    if lo > hi:
        lo, hi = hi, lo
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_between(-hi, -lo)
    # positive interval: continued-fraction walk
    fl = lo.numerator // lo.denominator
    if Fraction(fl) == lo:
        return lo
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # both in (fl, fl+1)
    inner = simplest_between(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / inner


@dataclass(frozen=True)
class IsolatedRoot:
    """One real root of ``factor`` inside [lo, hi]; ``exact`` set when the root is known exactly."""

    lo: Fraction
    hi: Fraction
    multiplicity: int
    factor: Poly = field(repr=False)
    exact: "Fraction | Surd | None" = None

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    @property
    def is_rational(self) -> bool:
        return isinstance(self.exact, Fraction)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def refine(self, tol: Fraction | None = None) -> "IsolatedRoot":
        if tol is None:
            tol = default_tolerance()
        if self.exact is not None:
            if isinstance(self.exact, Fraction):
                return IsolatedRoot(self.exact, self.exact, self.multiplicity, self.factor, self.exact)
            lo, hi = self.lo, self.hi
            while hi - lo > tol:
                mid = (lo + hi) / 2
                if mid < self.exact:
                    lo = mid
                else:
                    hi = mid
            return IsolatedRoot(lo, hi, self.multiplicity, self.factor, self.exact)
        lo, hi = _refine_interval(self.factor, self.lo, self.hi, tol)
        exact = lo if lo == hi else None
        return IsolatedRoot(lo, hi, self.multiplicity, self.factor, exact)

    def approx(self, dps: int = 40):
        """High-precision decimal approximation (mpmath mpf)."""
        with mpmath.workdps(dps + 10):
            if self.exact is not None:
                return +to_mpf(self.exact)
            tol = Fraction(1, 10 ** (dps + 5))
            r = self.refine(tol)
            return (to_mpf(r.lo) + to_mpf(r.hi)) / 2

    def __float__(self):
        return float(self.approx(20))

    def contains(self, v) -> bool:
        if self.exact is not None:
            return self.exact == v
        return self.lo <= v <= self.hi and self.factor(v) == 0

    def compare(self, v) -> int:
        """Exact sign of (root - v)."""
        if self.exact is not None:
            return _sign(self.exact - v)
        if self.factor(v) == 0 and self.lo <= v <= self.hi:
            return 0
        r = self
        while r.lo <= v <= r.hi:
            r = r.refine((r.hi - r.lo) / 4)
            if r.exact is not None:
                return _sign(r.exact - v)
        return 1 if r.lo > v else -1

    def to_json(self) -> dict:
        out = {
            "interval": [rat_str(self.lo), rat_str(self.hi)],
            "multiplicity": self.multiplicity,
            "approx": mpmath.nstr(self.approx(25), 20),
        }
        if self.exact is not None:
            out["exact"] = rat_str(self.exact)
        return out


def _refine_interval(f: Poly, lo: Fraction, hi: Fraction, tol: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink (lo, hi) holding a single simple root of square-free f."""
    slo = f.sign_at(lo)
    shi = f.sign_at(hi)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        sm = f.sign_at(mid)
        if sm == 0:
            return mid, mid
        if slo != 0 and sm != slo:
            hi, shi = mid, sm
        elif slo != 0:
            lo, slo = mid, sm
        elif shi != 0 and sm != shi:
            lo, slo = mid, sm
        elif shi != 0:
            hi, shi = mid, sm
        else:
            # both endpoints are roots of f: decide by counting
            if _descartes(f, lo, mid) >= 1:
                hi, shi = mid, sm
            else:
                lo, slo = mid, sm
    return lo, hi


def _isolate_square_free(f: Poly, lo: Fraction, hi: Fraction) -> list[tuple[Fraction, Fraction, bool]]:
    """Disjoint isolating intervals for roots of square-free f in the open interval (lo, hi)."""
    out: list[tuple[Fraction, Fraction, bool]] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        v = _descartes(f, a, b)
        if v == 0:
            continue
        if v == 1:
            out.append((a, b, False))
            continue
        mid = (a + b) / 2
        if f(mid) == 0:
            out.append((mid, mid, True))
        stack.append((a, mid))
        stack.append((mid, b))
    out.sort(key=lambda t: t[0])
    return out


def _rational_root_in(f: Poly, lo: Fraction, hi: Fraction) -> Fraction | None:
    """Exact rational root of rational f in the isolating interval (lo, hi), if one exists.

    A rational root has denominator dividing the cleared leading coefficient L,
    so an approximation within 1/(2 L^2) pins it as a continued-fraction
    convergent.  The approximation comes from a bracketed floating solve; the candidate
    is then confirmed by exact evaluation.
    """
    if not f.is_rational():
        return None
    from math import lcm

    den = 1
    for c in f.coeffs:
        den = lcm(den, c.denominator)
    lead = abs(int(f.lc * den))
    if f.degree == 1:
        r = -f.coeffs[0] / f.coeffs[1]
        return r if lo < r < hi else None
    digits = 2 * len(str(lead)) + len(str(max(abs(lo.numerator), abs(hi.numerator)) + 1)) + 20
    with mpmath.workdps(digits):
        cs = [mpmath.mpf(c.numerator) / c.denominator for c in f.coeffs]

        def ev(t):
            acc = mpmath.mpf(0)
            for c in reversed(cs):
                acc = acc * t + c
            return acc

        a = mpmath.mpf(lo.numerator) / lo.denominator
        b = mpmath.mpf(hi.numerator) / hi.denominator
        # an endpoint may itself be a root of f; orient by the other one
        sa, sb = f.sign_at(lo), f.sign_at(hi)
        open_ends = sa * sb != 0
        if sa == 0:
            sa = -sb
        width = mpmath.mpf(1) / (8 * lead * lead)
        t = None
        if open_ends:  # a root on an endpoint would attract the secant solve
            try:
                t = mpmath.findroot(ev, (a, b), solver="illinois", tol=width**2, verify=False)
            except (ValueError, ZeroDivisionError):
                t = None
            # accept only if a sign change within the target width brackets t
            if t is not None and not (a <= t <= b and ev(t - width) * ev(t + width) <= 0):
                t = None
        while t is None and b - a > width:
            mid = (a + b) / 2
            sm = mpmath.sign(ev(mid))
            if sm == 0:
                a = b = mid
                break
            if sm == sa:
                a = mid
            else:
                b = mid
        if t is None:
            t = (a + b) / 2
        neg, man, exp, _ = t._mpf_
        approx = (-1) ** neg * Fraction(int(man)) * Fraction(2) ** int(exp) if t else Fraction(0)
    cand = approx.limit_denominator(max(lead, 1))
    if lo < cand < hi and f(cand) == 0:
        return cand
    return None


def _quadratic_roots(f: Poly):
    c, b, a = f.coeffs
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    s = sqrt_rat(disc)
    r1 = (-b - s) / (2 * a)
    r2 = (-b + s) / (2 * a)
    return sorted({r1, r2}, key=to_mpf)


def real_roots(p: Poly, lo: Fraction | None = None, hi: Fraction | None = None) -> list[IsolatedRoot]:
    """All real roots in the open interval (lo, hi) (None = unbounded), ascending, with multiplicity.

    Each square-free factor is isolated on the whole line first so that its
    rational roots can be divided out; a leftover quadratic factor then gives
    its roots exactly in Q(sqrt(D)).
    """
    if p.is_zero():
        raise UndefinedRootsError("undefined roots: zero polynomial")
    if p.degree <= 0:
        return []
    lo = None if lo is None else _coerce(lo)
    hi = None if hi is None else _coerce(hi)
    if lo is not None and hi is not None and lo >= hi:
        return []
    roots: list[IsolatedRoot] = []
    for f, mult in square_free_decomposition(p):
        B = _cauchy_bound(f)
        found: list[IsolatedRoot] = []
        deflated = f
        pending = []
        for ilo, ihi, ex in _isolate_square_free(f, -B, B):
            r = ilo if ex else _rational_root_in(f, ilo, ihi)
            if r is not None:
                found.append(IsolatedRoot(r, r, mult, f, r))
                deflated = deflated // Poly([-r, 1])
            else:
                pending.append((ilo, ihi))
        quad = deflated.is_rational() and deflated.degree == 2 and pending
        candidates = _quadratic_roots(deflated) if quad else []
        for ilo, ihi in pending:
            # closed interval must exclude neighbouring roots sitting on an endpoint
            while f(ilo) == 0 or f(ihi) == 0:
                ilo, ihi = _refine_interval(f, ilo, ihi, (ihi - ilo) / 2)
            exact = None
            for c in candidates:
                if ilo <= c <= ihi:
                    exact = c
            found.append(IsolatedRoot(ilo, ihi, mult, f, exact))
        for r in found:
            roots.extend(_clip(r, lo, hi))
    roots.sort(key=lambda r: (r.lo, r.hi))
    return roots


def _clip(r: IsolatedRoot, lo, hi) -> list[IsolatedRoot]:
    """Keep r if it lies strictly inside (lo, hi), tightening its interval to the window."""
    if lo is not None and r.compare(lo) <= 0:
        return []
    if hi is not None and r.compare(hi) >= 0:
        return []
    a = r.lo if lo is None else max(r.lo, lo)
    b = r.hi if hi is None else min(r.hi, hi)
    return [IsolatedRoot(a, b, r.multiplicity, r.factor, r.exact)]


def real_roots_above(p: Poly, bound) -> list[IsolatedRoot]:
    """Real roots strictly greater than ``bound`` with exact multiplicities."""
    return real_roots(p, lo=_coerce(bound), hi=None)


def interval_eval(p: Poly, lo, hi) -> tuple:
    """Sound enclosure [min, max] of p over [lo, hi] by interval Horner."""
    a, b = Fraction(0), Fraction(0)
    for c in reversed(p.coeffs):
        prods = (a * lo, a * hi, b * lo, b * hi)
        a = min(prods) + c
        b = max(prods) + c
    return a, b


# ---------------------------------------------------------------------------
# resultant / discriminant


def resultant(f: Poly, g: Poly, method: str = "euclid"):
    """Resultant Res(f, g) over the coefficient field."""
    if method == "sylvester":
        return _sylvester_resultant(f, g)
    if f.is_zero() or g.is_zero():
        return Fraction(0)
    m, n = f.degree, g.degree
    if n == 0:
        return g.lc**m
    if m == 0:
        return f.lc**n
    r = f % g
    if r.is_zero():
        return Fraction(0)
    sign = -1 if (m * n) % 2 else 1
    return sign * g.lc ** (m - r.degree) * resultant(g, r)


def _sylvester_resultant(f: Poly, g: Poly):
    m, n = f.degree, g.degree
    size = m + n
    if size == 0:
        return Fraction(1)
    rows = []
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    for i in range(n):
        rows.append([Fraction(0)] * i + fc + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + gc + [Fraction(0)] * (size - n - 1 - i))
    return det(rows)


def det(mat: list[list]) -> Fraction:
    """Exact determinant by fraction-field Gaussian elimination."""
    a = [list(r) for r in mat]
    n = len(a)
    out = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            out = -out
        pv = a[col][col]
        out = out * pv
        for r in range(col + 1, n):
            f = a[r][col] / pv
            if f != 0:
                for k in range(col, n):
                    a[r][k] = a[r][k] - f * a[col][k]
    return out


def discriminant(p: Poly):
    """Disc(p) = (-1)^(n(n-1)/2) Res(p, p') / lc(p)."""
    n = p.degree
    if n < 2:
        raise ValueError("discriminant needs degree >= 2")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(p, p.derivative()) / p.lc


# ---------------------------------------------------------------------------
# rational functions (used for exact limits)


class RatFunc:
    """num/den in one variable, kept with monic denominator and cancelled gcd."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly([num])
        den = Poly([1]) if den is None else (den if isinstance(den, Poly) else Poly([den]))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = Poly(), Poly([1])
            return
        g = num.gcd(den)
        if g.degree > 0:
            num, den = num // g, den // g
        lc = den.lc
        self.num, self.den = num / lc, den / lc

    def _lift(self, o):
        return o if isinstance(o, RatFunc) else RatFunc(o)

    def __add__(self, o):
        o = self._lift(o)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._lift(o)
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, o):
        return self._lift(o) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFunc(self.den**-k, self.num**-k)
        return RatFunc(self.num**k, self.den**k)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction, Poly)):
            o = RatFunc(o)
        if not isinstance(o, RatFunc):
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, v):
        return self.num(v) / self.den(v)

    def limit_at_infinity(self):
        """Exact limit as the variable tends to +infinity; raises if unbounded."""
        if self.num.is_zero():
            return Fraction(0)
        dn, dd = self.num.degree, self.den.degree
        if dn < dd:
            return Fraction(0)
        if dn == dd:
            return self.num.lc / self.den.lc
        raise ValueError("rational function unbounded at infinity")

    def __repr__(self):
        return f"RatFunc({self.num!r}, {self.den!r})"


# ---------------------------------------------------------------------------
# identity checking


@dataclass(frozen=True)
class IdentityReport:
    name: str
    holds: bool
    differences: dict  # m -> Poly (only nonzero ones)
    ms: tuple

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "holds": self.holds,
            "m_values": list(self.ms),
            "differences": {str(m): d.to_json() for m, d in self.differences.items()},
        }


def identity_check(
    lhs: Callable[[int], Poly] | Poly,
    rhs: Callable[[int], Poly] | Poly,
    ms: Iterable[int] = range(1, 13),
    name: str = "",
) -> IdentityReport:
    """Expand both sides exactly for each integer m and compare."""
    ms = tuple(ms)
    diffs = {}
    for m in ms:
        left = lhs(m) if callable(lhs) and not isinstance(lhs, Poly) else lhs
        right = rhs(m) if callable(rhs) and not isinstance(rhs, Poly) else rhs
        left = left if isinstance(left, Poly) else Poly([left])
        right = right if isinstance(right, Poly) else Poly([right])
        d = left - right
        if not d.is_zero():
            diffs[m] = d
    return IdentityReport(name, not diffs, diffs, ms)
