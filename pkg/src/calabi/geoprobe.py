"""Quadrature probes: ray lengths, volumes and volume growth.

Along the diagonal ray the metric restricts to r/(2p(r)) dr^2, and the
sublevel set {a <= r <= R} has volume 2 pi^2 (R^2 - a^2).  For the conformal
Einstein metric scal^-2 g both pick up powers of 1/|scal|.

Improper endpoints are never integrated numerically.  Their behaviour is read
off from the multiplicity of the root of p (and of scal) or from the degree at
infinity, and divergence is reported with its exponent.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .ansatz import Profile
from .errors import DomainError, ParameterError
from .exactpoly import Poly, rat_str, real_roots
from .surd import to_mpf

__all__ = [
    "RayLength",
    "GrowthEstimate",
    "ray_length",
    "volume",
    "growth_exponent",
    "endpoint_exponent",
    "growth_csv",
]

DEFAULT_REL_TOL = mpmath.mpf(10) ** -10
_DPS = 30


def _scal_poly(pr: Profile) -> Poly:
    return Poly([2 * pr.q3, pr.q4])


def _multiplicity_at(p: Poly, v) -> int:
    k = 0
    while not p.is_zero() and p(v) == 0:
        p = p.derivative()
        k += 1
    return k


def endpoint_exponent(pr: Profile, end, conformal: bool = False) -> Fraction:
    """Exponent e of the ray integrand near ``end``.

    Finite end: integrand ~ |l - end|^(-e), integrable iff e < 1.
    end = inf: integrand ~ l^(-e), integrable iff e > 1.
    """
    p = pr.p_poly
    s = _scal_poly(pr)
    if end == mpmath.inf or end is None:
        e = Fraction(p.degree - 1, 2)
        if conformal:
            e += max(s.degree, 0)
        return e
    e = Fraction(_multiplicity_at(p, end), 2)
    if conformal:
        e += _multiplicity_at(s, end)
    return e


def _converges(e: Fraction, infinite: bool) -> bool:
    return e > 1 if infinite else e < 1


@dataclass(frozen=True)
class RayLength:
    value: object  # mpf, or None when divergent
    error: object
    diverges: bool
    endpoint: object = None  # the offending end when divergent
    exponent: Fraction | None = None

    def to_json(self) -> dict:
        if self.diverges:
            end = "inf" if self.endpoint == mpmath.inf else rat_str(self.endpoint)
            return {"diverges": True, "endpoint": end, "exponent": rat_str(self.exponent)}
        return {"diverges": False, "value": mpmath.nstr(self.value, 17), "error": mpmath.nstr(self.error, 3)}


def _rat_or_inf(v):
    if v is None or v == mpmath.inf or (isinstance(v, str) and v.lower() in ("inf", "infinity")):
        return mpmath.inf
    return Fraction(v) if not isinstance(v, str) else Fraction(v)


def _integrand(pr: Profile, conformal: bool):
    # p(a) = 0 for smooth closure; dividing the factor out keeps rounding near a from flipping the sign
    p = pr.p_poly
    k = 0
    while p(pr.a) == 0 and not p.is_zero():
        p = p // Poly([-pr.a, 1])
        k += 1
    a = to_mpf(pr.a)
    s = _scal_poly(pr)
    pc = [to_mpf(c) for c in p.coeffs]
    sc = [to_mpf(c) for c in s.coeffs] or [mpmath.mpf(0)]

    def ev(cs, x):
        acc = mpmath.mpf(0)
        for c in reversed(cs):
            acc = acc * x + c
        return acc

    def f(x):
        val = mpmath.sqrt(x / (2 * (x - a) ** k * ev(pc, x)))
        if conformal:
            val /= abs(ev(sc, x))
        return val

    return f


def _check_interior(pr: Profile, lo, hi, conformal: bool):
    hi_r = None if hi == mpmath.inf else hi
    bad = real_roots(pr.p_poly, lo, hi_r)
    if bad:
        raise DomainError(f"p has a root inside ({rat_str(lo)}, {'inf' if hi_r is None else rat_str(hi_r)})")
    if conformal:
        s = _scal_poly(pr)
        if s.degree >= 1 and real_roots(s, lo, hi_r):
            raise DomainError("scalar curvature vanishes inside the conformal range")
        if s.is_zero():
            raise DomainError("scalar curvature vanishes identically")
    mid = lo + 1 if hi == mpmath.inf else (lo + hi) / 2
    if not pr.p_poly(mid) > 0:
        raise DomainError("p is not positive on the interval")


def ray_length(pr: Profile, r_lo=None, r_hi=None, conformal: bool = False, tol=None) -> RayLength:
    """Length of the diagonal ray between r_lo (default a) and r_hi (a rational or inf)."""
    lo = pr.a if r_lo is None else Fraction(r_lo)
    hi = _rat_or_inf(r_hi)
    if lo < pr.a or not (hi == mpmath.inf or hi > lo):
        raise ParameterError("need a <= r_lo < r_hi")
    _check_interior(pr, lo, hi, conformal)
    for end, infinite in ((lo, False), (hi, hi == mpmath.inf)):
        e = endpoint_exponent(pr, None if infinite else end, conformal)
        if not _converges(e, infinite):
            return RayLength(None, None, True, end, e)
    f = _integrand(pr, conformal)
    with mpmath.workdps(_DPS):
        a, b = to_mpf(lo), (mpmath.inf if hi == mpmath.inf else to_mpf(hi))
        val, err = mpmath.quad(f, [a, b], error=True, maxdegree=10)
    return RayLength(val, err, False)


def volume(pr: Profile, r_hi, conformal: bool = False, method: str = "closed") -> object:
    """Volume of {a <= r <= r_hi}; mpf, or mpmath.inf when the conformal volume diverges."""
    hi = _rat_or_inf(r_hi)
    a = pr.a
    if hi != mpmath.inf and hi < a:
        raise ParameterError("r_hi must be at least a")
    if hi == a:
        return mpmath.mpf(0)
    two_pi2 = 2 * mpmath.pi**2
    if not conformal:
        if method == "closed":
            if hi == mpmath.inf:
                return mpmath.inf
            return two_pi2 * to_mpf(hi * hi - a * a)
        with mpmath.workdps(_DPS):
            return two_pi2 * mpmath.quad(lambda r: 2 * r, [to_mpf(a), to_mpf(hi) if hi != mpmath.inf else mpmath.inf])
    s = _scal_poly(pr)
    hi_r = None if hi == mpmath.inf else hi
    if s.is_zero() or (s.degree >= 1 and real_roots(s, a, hi_r)):
        raise DomainError("scalar curvature vanishes inside the conformal range")
    if hi == mpmath.inf:
        if s.degree < 1:
            return mpmath.inf
    elif s(hi) == 0:
        return mpmath.inf
    sc = [to_mpf(c) for c in s.coeffs]
    with mpmath.workdps(_DPS):
        f = lambda r: 2 * r / (sc[0] + (sc[1] if len(sc) > 1 else 0) * r) ** 4  # noqa: E731
        return two_pi2 * mpmath.quad(f, [to_mpf(a), to_mpf(hi) if hi != mpmath.inf else mpmath.inf])


# ---------------------------------------------------------------------------
# growth


@dataclass(frozen=True)
class GrowthEstimate:
    model: str  # polynomial | exponential | finite
    value: object  # exponent, rate or total volume
    residual: float
    end: object
    table: tuple = field(default_factory=tuple)  # (ell, R, Vol)

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "value": float(self.value),
            "fit_residual": self.residual,
            "end": "inf" if self.end == mpmath.inf else rat_str(self.end),
            "samples": len(self.table),
        }


def _complete_end(pr: Profile, conformal: bool):
    """The end probed: first root of p (or of scal when conformal) above a, else infinity."""
    cands = []
    for r in real_roots(pr.p_poly, pr.a, None):
        cands.append(r)
        break
    s = _scal_poly(pr)
    if conformal and s.degree >= 1:
        for r in real_roots(s, pr.a, None):
            cands.append(r)
            break
    if not cands:
        return mpmath.inf
    first = min(cands, key=lambda r: r.approx(30))
    if first.exact is None or not isinstance(first.exact, Fraction):
        raise DomainError("growth probe needs a rational end point")
    return first.exact


def _lstsq(xs, ys):
    n = len(xs)
    mx = mpmath.fsum(xs) / n
    my = mpmath.fsum(ys) / n
    sxx = mpmath.fsum((x - mx) ** 2 for x in xs)
    sxy = mpmath.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    icpt = my - slope * mx
    res = mpmath.sqrt(mpmath.fsum((y - slope * x - icpt) ** 2 for x, y in zip(xs, ys)) / n)
    return slope, res


def growth_exponent(pr: Profile, conformal: bool = False, samples: int = 24) -> GrowthEstimate:
    """Pair distance to the zero section with sublevel volume and fit the growth model."""
    if samples < 20:
        raise ParameterError("at least 20 samples are needed for the fit")
    end = _complete_end(pr, conformal)
    infinite = end == mpmath.inf
    e = endpoint_exponent(pr, None if infinite else end, conformal)
    if _converges(e, infinite):
        raise DomainError("the metric is incomplete in this direction; growth is meaningless")
    logarithmic = e == 1
    a = pr.a
    # sample radii approaching the end, far into the asymptotic regime
    if infinite:
        ells = [a * Fraction(10) ** 3 * Fraction(10) ** Fraction(6 * i, samples - 1) for i in range(samples)]
        ells = [Fraction(round(v * 1000), 1000) for v in ells]
    else:
        gap = end - a
        ells = [end - gap * Fraction(1, 10**3) / Fraction(10) ** Fraction(5 * i, samples - 1) for i in range(samples)]
        ells = [end - Fraction(1, 10**30) * round((end - v) * 10**30) for v in ells]
    f = _integrand(pr, conformal)
    table = []
    with mpmath.workdps(_DPS):
        start = to_mpf(a)
        dist = mpmath.quad(f, [start, to_mpf(ells[0])])
        prev = ells[0]
        vol = volume(pr, ells[0], conformal)
        table.append((prev, dist, vol))
        for v in ells[1:]:
            dist += mpmath.quad(f, [to_mpf(prev), to_mpf(v)])
            prev = v
            table.append((v, dist, volume(pr, v, conformal)))
        tail = table[len(table) // 2:]
        ys = [mpmath.log(t[2]) for t in tail]
        if logarithmic:
            xs = [t[1] for t in tail]
            model = "exponential"
        else:
            xs = [mpmath.log(t[1]) for t in tail]
            model = "polynomial"
        slope, res = _lstsq(xs, ys)
    return GrowthEstimate(model, slope, float(res), end, tuple(table))


def growth_csv(est: GrowthEstimate) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["ell", "R", "volume"])
    for ell, R, V in est.table:
        w.writerow([rat_str(ell), mpmath.nstr(R, 17), mpmath.nstr(V, 17)])
    return buf.getvalue()
