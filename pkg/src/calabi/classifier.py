"""Global behaviour of a profile, the moduli atlas for m >= 3, Hitchin-Thorpe."""

from __future__ import annotations

from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .ansatz import Profile
from .errors import ConvexityError, DegenerateProfileError, ParameterError, UnsupportedError
from .exactpoly import IsolatedRoot, Poly, interval_eval, parse_rat, rat_str, real_roots_above
from .surd import Surd, to_mpf

__all__ = [
    "Classification",
    "AtlasRegion",
    "classify",
    "atlas_polynomial",
    "atlas_cubic",
    "atlas_boundaries",
    "atlas_region",
    "hitchin_thorpe",
    "KINDS",
]

KINDS = (
    "IncompleteEnd",
    "CompleteQuarticGrowth",
    "CompleteExponentialGrowth",
    "ConeAngleCompactification",
    "CompleteFiniteVolume",
)


@dataclass(frozen=True)
class Classification:
    kind: str
    p_degree: int
    roots: tuple  # IsolatedRoot above a
    b: IsolatedRoot | None = None
    multiplicity: int | None = None
    weight: object = None  # Fraction | Surd | (lo, hi) enclosure
    weight_approx: object = None

    @property
    def angle_over_2pi(self):
        """Cone angle divided by 2 pi, i.e. 1 / weight (the theorem's beta)."""
        if self.weight is None:
            return None
        if isinstance(self.weight, tuple):
            lo, hi = self.weight
            return (1 / hi, 1 / lo)
        return 1 / self.weight

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "p_degree": self.p_degree,
            "roots": [r.to_json() for r in self.roots],
            "b": None if self.b is None else self.b.to_json(),
        }
        if self.multiplicity is not None:
            out["multiplicity"] = self.multiplicity
        if self.weight is not None:
            if isinstance(self.weight, tuple):
                out["weight"] = [rat_str(self.weight[0]), rat_str(self.weight[1])]
                lo, hi = self.angle_over_2pi
                out["angle_over_2pi"] = [rat_str(lo), rat_str(hi)]
            else:
                out["weight"] = rat_str(self.weight)
                out["angle_over_2pi"] = rat_str(self.angle_over_2pi)
            out["weight_approx"] = mpmath.nstr(self.weight_approx, 20)
        return out


def _cone_weight(p: Poly, m: int, b: IsolatedRoot):
    """weight = -m b / p'(b), exact when b is, otherwise a certified enclosure."""
    dp = p.derivative()
    if b.exact is not None:
        slope = dp(b.exact)
        if not slope < 0:
            raise ConvexityError("p'(b) is not negative at a simple root", b.exact)
        w = -m * b.exact / slope
        return w, to_mpf(w)
    r = b.refine(Fraction(1, 10**40))
    lo_d, hi_d = interval_eval(dp, r.lo, r.hi)
    if not hi_d < 0:
        raise ConvexityError("could not certify p'(b) < 0", r.lo)
    # -m b / p'(b) with b in [lo, hi] and p'(b) in [lo_d, hi_d] (both negative)
    w_lo = m * r.lo / -lo_d
    w_hi = m * r.hi / -hi_d
    approx = -m * r.approx(30) / to_mpf(dp((r.lo + r.hi) / 2))
    return (w_lo, w_hi), approx


def classify(pr: Profile) -> Classification:
    """Decision tree on the degree of p and its smallest root above a."""
    p = pr.p_poly
    if p.is_zero():
        raise DegenerateProfileError("p_poly vanishes identically; metric undefined")
    roots = tuple(real_roots_above(p, pr.a))
    deg = p.degree
    if not roots:
        probe = pr.a + 1
        if p(probe) <= 0:
            raise ConvexityError("p_poly is not positive beyond a", probe)
        if deg == 2:
            kind = "CompleteQuarticGrowth"
        elif deg == 3:
            kind = "CompleteExponentialGrowth"
        else:
            kind = "IncompleteEnd"
        return Classification(kind, deg, roots)
    b = roots[0]
    probe = (pr.a + b.lo) / 2 if b.lo > pr.a else pr.a + (b.refine(Fraction(1, 10**6)).lo - pr.a) / 2
    if p(probe) <= 0:
        raise ConvexityError("p_poly is not positive on (a, b)", probe)
    if b.multiplicity >= 2:
        return Classification("CompleteFiniteVolume", deg, roots, b, b.multiplicity)
    w, approx = _cone_weight(p, pr.m, b)
    return Classification("ConeAngleCompactification", deg, roots, b, 1, w, approx)


# ---------------------------------------------------------------------------
# atlas for m >= 3

Y = Poly.x()


def atlas_polynomial(m: int, y) -> Poly:
    """Cubic in tau whose discriminant in y carries the factor v(y)."""
    T = Poly.x()
    y = Fraction(y)
    return y * (y + 4 * (m - 2)) * T**3 + 2 * y * (y - 8) * T**2 + 24 * m * (4 - y) * T + 96 * m * m


def atlas_cubic(m: int) -> Poly:
    """v(y) = y^3 + 6(3m-2) y^2 + 72 m (m-2) y + 256."""
    return Y**3 + 6 * (3 * m - 2) * Y**2 + 72 * m * (m - 2) * Y + 256


@lru_cache(maxsize=64)
def _atlas_roots(m: int) -> tuple:
    roots = real_roots_above(atlas_cubic(m), -(10**9))
    if len(roots) != 3:
        raise UnsupportedError(f"v(y) does not have three real roots for m = {m}")
    return tuple(roots)


def atlas_boundaries(m: int) -> dict:
    """The seven cut points; y1, y2, y3 as isolated roots of v."""
    y1, y2, y3 = _atlas_roots(m)
    return {
        "y1": y1,
        "-12m": Fraction(-12 * m),
        "-6(m-2)": Fraction(-6 * (m - 2)),
        "y2": y2,
        "-4(m-2)": Fraction(-4 * (m - 2)),
        "y3": y3,
        "0": Fraction(0),
    }


def _cmp(y: Fraction, point) -> int:
    if isinstance(point, IsolatedRoot):
        return -point.compare(y)
    return (y > point) - (y < point)


@dataclass(frozen=True)
class AtlasRegion:
    m: int
    y: Fraction
    label: str
    space: str
    metric_type: str
    einstein_scalar_sign: str
    boundaries: dict

    def to_json(self) -> dict:
        b = {}
        for k, v in self.boundaries.items():
            b[k] = mpmath.nstr(v.approx(25), 20) if isinstance(v, IsolatedRoot) else rat_str(v)
        return {
            "m": self.m,
            "y": rat_str(self.y),
            "label": self.label,
            "space": self.space,
            "metric_type": self.metric_type,
            "einstein_scalar_sign": self.einstein_scalar_sign,
            "boundaries": b,
        }


def atlas_region(m: int, y) -> AtlasRegion:
    """Locate y = a s(a) among the cut points and report the expected geometry."""
    if not isinstance(m, int) or m < 3:
        raise UnsupportedError("the atlas covers m >= 3 only")
    y = parse_rat(y)
    bounds = atlas_boundaries(m)
    names = list(bounds)
    label = None
    # named rational cut points win ties (y2 = -4(m-2) when m = 3)
    for name in sorted(names, key=lambda n: isinstance(bounds[n], IsolatedRoot)):
        if _cmp(y, bounds[name]) == 0:
            label = name
            break
    if label is None:
        prev = "-inf"
        for name in names:
            if _cmp(y, bounds[name]) < 0:
                label = f"({prev},{name})"
                break
            prev = name
        else:
            label = f"({names[-1]},inf)"

    hm_labels = {"(-4(m-2),y3)", "y3", "(y3,0)"}
    space = f"H_{m}" if label in hm_labels else f"O(-{m})"
    if label == "-4(m-2)":
        metric_type = "kahler-einstein"
    elif label == "0":
        metric_type = "scalar-flat"
    elif label in hm_labels:
        metric_type = "cone-angle"
    else:
        metric_type = "incomplete"

    if y == 0:
        sign = "not-applicable"
    else:
        S = -2 * y * y * (y + 6 * (m - 2))
        sign = "positive" if S > 0 else ("negative" if S < 0 else "zero")
    return AtlasRegion(m, y, label, space, metric_type, sign, bounds)


def hitchin_thorpe(beta, chi: int = 4, tau: int = 0, chi_sigma: int = 2, self_int: int = 1) -> bool:
    """Edge-cone Hitchin-Thorpe test 2 chi +- 3 tau >= (1 - beta)(2 chi(S) +- (1 + beta) S.S).

    Defaults describe CP^2 # conj(CP^2) with the divisor a sphere of self-intersection 1,
    giving 8 >= (1 - beta)(4 +- (1 + beta)).
    """
    if isinstance(beta, (Fraction, int, Surd)):
        b = beta
    elif isinstance(beta, str):
        b = parse_rat(beta)
    else:
        b = Fraction(beta)  # floats converted exactly
    if not b > 0:
        raise ParameterError("beta must be positive")
    for sgn in (1, -1):
        lhs = 2 * chi + sgn * 3 * tau
        rhs = (1 - b) * (2 * chi_sigma + sgn * (1 + b) * self_int)
        if not lhs >= rhs:
            return False
    return True
