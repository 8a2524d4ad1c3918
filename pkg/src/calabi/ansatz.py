"""Profile polynomials of the U(2)-invariant extremal ansatz.

A profile is the quartic q(r) = q0 + q1 r + (q3/6) r^3 + (q4/24) r^4 on the
polytope coordinate r = x1 + x2, together with the bundle degree m and the
zero-section size a.  Everything global about the metric is read off from
p(r) = r^2 - q(r).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DefectError, DegeneratePolytopeError, ParameterError
from .exactpoly import Poly, RatFunc, parse_rat, rat_str
from .surd import Surd, to_mpf

__all__ = [
    "Profile",
    "ConeProfile",
    "ScalarCurvature",
    "EinsteinConstant",
    "VanishingLocus",
    "local_q3_q4",
    "profile_from_local",
    "profile_from_cone",
    "cone_affine_coefficients",
    "cone_limit_profile",
    "is_bach_flat",
    "bach_defect",
    "scalar_curvature",
    "einstein_constant",
    "vanishing_locus",
    "cone_printed_coefficients",
]

Scalar = Union[Fraction, Surd]


def _rat(v, name: str) -> Fraction:
    try:
        return parse_rat(v)
    except (ValueError, TypeError) as exc:
        raise ParameterError(f"{name}: {exc}") from exc


def _check_ma(m, a) -> tuple[int, Fraction]:
    if not isinstance(m, int) or isinstance(m, bool) or m <= 0:
        raise ParameterError(f"m must be a positive integer, got {m!r}")
    a = _rat(a, "a")
    if a <= 0:
        raise ParameterError(f"a must be positive, got {a}")
    return m, a


@dataclass(frozen=True)
class Profile:
    m: int
    a: Fraction
    q0: Scalar
    q1: Scalar
    q3: Scalar
    q4: Scalar

    @property
    def q_poly(self) -> Poly:
        return Poly([self.q0, self.q1, 0, self.q3 / 6, self.q4 / 24])

    @property
    def p_poly(self) -> Poly:
        return Poly([0, 0, 1]) - self.q_poly

    @property
    def s_a(self) -> Scalar:
        return 2 * self.q3 + self.q4 * self.a

    @property
    def y(self) -> Scalar:
        return self.a * self.s_a

    def p_tilde(self) -> Poly:
        """Scale-invariant profile p(a t)/a^2."""
        return self.p_poly.scale(self.a) / (self.a * self.a)

    def smoothness_residuals(self) -> tuple[Scalar, Scalar]:
        """(p(a), p'(a) - a m); both vanish for a metric closing smoothly on the zero section."""
        p = self.p_poly
        return p(self.a), p.derivative()(self.a) - self.a * self.m

    def with_q(self, **changes) -> "Profile":
        data = dict(m=self.m, a=self.a, q0=self.q0, q1=self.q1, q3=self.q3, q4=self.q4)
        data.update(changes)
        return Profile(**data)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "a": rat_str(self.a),
            "q": [rat_str(c) for c in (self.q0, self.q1, Fraction(0), self.q3 / 6, self.q4 / 24)],
            "q_factorial": {"q0": rat_str(self.q0), "q1": rat_str(self.q1), "q3": rat_str(self.q3), "q4": rat_str(self.q4)},
            "convention": "factorial-stored",
            "y": rat_str(self.y),
            "p_poly": self.p_poly.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Profile":
        m = int(data["m"])
        a = parse_rat(data["a"])
        if "q_factorial" in data:
            qf = data["q_factorial"]
            return cls(m, a, parse_rat(qf["q0"]), parse_rat(qf["q1"]), parse_rat(qf["q3"]), parse_rat(qf["q4"]))
        q = [parse_rat(c) for c in data["q"]]
        if len(q) != 5 or q[2] != 0:
            raise ParameterError("profile JSON needs five monomial coefficients with zero r^2 term")
        return cls(m, a, q[0], q[1], 6 * q[3], 24 * q[4])


@dataclass(frozen=True)
class ConeProfile:
    base: Profile
    x: Fraction
    weight: Scalar

    @property
    def b(self) -> Fraction:
        return self.base.a * self.x

    @property
    def angle_over_2pi(self) -> Scalar:
        return 1 / self.weight

    def end_residuals(self) -> tuple[Scalar, Scalar]:
        """(p(b), p'(b) + b m / weight); zero for a cone angle 2 pi / weight along the divisor at b."""
        p = self.base.p_poly
        b = self.b
        return p(b), p.derivative()(b) + b * self.base.m / self.weight

    def to_json(self) -> dict:
        out = self.base.to_json()
        out.update(
            {
                "x": rat_str(self.x),
                "b": rat_str(self.b),
                "weight": rat_str(self.weight),
                "weight_approx": float(to_mpf(self.weight)),
                "angle_over_2pi": rat_str(self.angle_over_2pi),
            }
        )
        return out


# ---------------------------------------------------------------------------
# construction


def local_q3_q4(m: int, a, s_a) -> tuple[Fraction, Fraction]:
    """q3 and q4 fixed by smoothness at r = a and the value s(a) of the scalar curvature."""
    m, a = _check_ma(m, a)
    s = _rat(s_a, "s_a")
    y = a * s
    q3 = s * (y + 8 * (m - 1)) / (8 * m)
    q4 = -(s / a) * (y + 4 * (m - 2)) / (4 * m)
    return q3, q4


def profile_from_local(m: int, a, s_a) -> Profile:
    """Bach-flat profile determined by (m, a, s(a))."""
    m, a = _check_ma(m, a)
    s = _rat(s_a, "s_a")
    y = a * s
    q0 = a * a * (y + 8 * m - 8) * (y + 12 * m) / (96 * m)
    q1 = -a * (y + 4 * m - 8) * (y + 12 * m) / (48 * m)
    q3, q4 = local_q3_q4(m, a, s)
    return Profile(m, a, q0, q1, q3, q4)


def _solve(mat: list[list], rhs: list[list]) -> list[list]:
    """Gauss-Jordan over any exact field; rhs is a list of column vectors."""
    n = len(mat)
    aug = [list(mat[i]) + [col[i] for col in rhs] for i in range(n)]
    k = len(rhs)
    for c in range(n):
        piv = next((r for r in range(c, n) if not aug[r][c] == 0), None)
        if piv is None:
            raise DegeneratePolytopeError("singular smoothness system")
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [v / pv for v in aug[c]]
        for r in range(n):
            if r != c and not aug[r][c] == 0:
                f = aug[r][c]
                aug[r] = [vr - f * vc for vr, vc in zip(aug[r], aug[c])]
    return [[aug[i][n + j] for i in range(n)] for j in range(k)]


def cone_affine_coefficients(m: int, a, x):
    """Solve the four end conditions for q; returns (u, v) with (q0, q1, q3, q4) = u + v / weight.

    ``x`` may be a Fraction or a RatFunc in x (used for exact x -> infinity limits).
    """
    b = a * x
    one = Fraction(1)
    # unknowns: monomial coefficients c0, c1, c3, c4
    mat = [
        [one, a, a**3, a**4],
        [0 * one, one, 3 * a**2, 4 * a**3],
        [one, b, b * b * b, b * b * b * b],
        [0 * one, one, 3 * b * b, 4 * b * b * b],
    ]
    rhs0 = [a * a, (2 - m) * a, b * b, 2 * b]
    rhs1 = [0 * one, 0 * one, 0 * one, m * b]
    # pad mixed Fraction/RatFunc entries so arithmetic stays in one field
    if isinstance(x, RatFunc):
        mat = [[v if isinstance(v, RatFunc) else RatFunc(v) for v in row] for row in mat]
        rhs0 = [v if isinstance(v, RatFunc) else RatFunc(v) for v in rhs0]
        rhs1 = [v if isinstance(v, RatFunc) else RatFunc(v) for v in rhs1]
    c_u, c_v = _solve(mat, [rhs0, rhs1])
    scale = (1, 1, 6, 24)
    u = tuple(c * s for c, s in zip(c_u, scale))
    v = tuple(c * s for c, s in zip(c_v, scale))
    return u, v


def profile_from_cone(m: int, a, x, weight) -> ConeProfile:
    """Extremal profile closing smoothly at a and with weight ``weight`` at b = a x.

    ``weight`` may be rational (decimals are read exactly) or a Surd.
    """
    m, a = _check_ma(m, a)
    x = _rat(x, "x")
    if x <= 1:
        raise DegeneratePolytopeError(f"degenerate polytope: x = {x} must exceed 1")
    if not isinstance(weight, Surd):
        weight = _rat(weight, "weight")
    if weight <= 0:
        raise ParameterError("weight must be positive")
    u, v = cone_affine_coefficients(m, a, x)
    w = 1 / weight
    q0, q1, q3, q4 = (ui + vi * w for ui, vi in zip(u, v))
    return ConeProfile(Profile(m, a, q0, q1, q3, q4), x, weight)


def cone_limit_profile(m: int, a, x) -> Profile:
    """The weight -> infinity member of the cone family."""
    m, a = _check_ma(m, a)
    x = _rat(x, "x")
    if x <= 1:
        raise DegeneratePolytopeError(f"degenerate polytope: x = {x} must exceed 1")
    u, _ = cone_affine_coefficients(m, a, x)
    return Profile(m, a, *u)


def cone_printed_coefficients(m: int, a, x, p) -> tuple:
    """Closed-form cone coefficients (factorial convention), kept as an independent oracle."""
    a = Fraction(a)
    den = p * (x - 1) ** 2 * (x * x + 4 * x + 1)
    q0 = a * a * (p * (m - 1) * x**2 + ((2 * m + 2) * p - 2 * m) * x - m - p) * x * x / den
    q1 = -a * (p * (m - 2) * x**3 + ((2 * m + 2) * p - 3 * m) * x**2 + ((3 * m + 2) * p - 2 * m) * x - m - 2 * p) * x / den
    q3 = (
        6 * (2 * p - m) * x**3 + ((18 * m - 12) * p - 12 * m) * x**2 + (12 * (m - 1) * p - 18 * m) * x + 6 * p * (m + 2)
    ) / (a * den)
    q4 = (24 * (m - p) * x**2 + ((1 - m) * p + m) * 48 * x - 24 * (m + 1) * p) / (a * a * den)
    return q0, q1, q3, q4


# ---------------------------------------------------------------------------
# interrogation


def bach_defect(pr: Profile) -> Scalar:
    return pr.q3 * pr.q1 - pr.q4 * pr.q0


def is_bach_flat(pr: Profile, tol=None) -> bool:
    """Exact test q3 q1 = q4 q0; with ``tol`` the defect is compared in absolute value."""
    d = bach_defect(pr)
    if tol is None:
        return d == 0
    return abs(to_mpf(d)) <= tol


@dataclass(frozen=True)
class ScalarCurvature:
    A0: Scalar
    A1: Scalar
    m: int
    a: Fraction
    s_a: Scalar

    def __call__(self, r):
        return self.A0 + self.A1 * r

    def y_form(self, r):
        """Same function written through y = a s(a); valid for profiles closing smoothly at a."""
        y = self.a * self.s_a
        return (self.s_a / (4 * self.m)) * (y + 8 * (self.m - 1) - (y + 4 * (self.m - 2)) * r / self.a)

    @property
    def poly(self) -> Poly:
        return Poly([self.A0, self.A1])


def scalar_curvature(pr: Profile) -> ScalarCurvature:
    return ScalarCurvature(2 * pr.q3, pr.q4, pr.m, pr.a, pr.s_a)


@dataclass(frozen=True)
class EinsteinConstant:
    value: Scalar
    coefficient_form: Scalar
    y_form: Scalar
    bach_flat: bool

    def to_json(self) -> dict:
        return {
            "S": rat_str(self.value),
            "coefficient_form": rat_str(self.coefficient_form),
            "y_form": rat_str(self.y_form),
            "bach_flat": self.bach_flat,
        }


def einstein_constant(pr: Profile) -> EinsteinConstant:
    """Scalar curvature S of the conformal metric scal^-2 g.

    Coefficient form 12 q4^2 q1 + 8 q3^3 + 48 q3 q4; the y form
    -2 y^2 (y + 6(m-2)) / a^3 is its rewriting for profiles closing smoothly at a.
    On a Bach-flat smooth profile the two must agree.
    """
    s1 = 12 * pr.q4 * pr.q4 * pr.q1 + 8 * pr.q3**3 + 48 * pr.q3 * pr.q4
    y = pr.y
    s2 = -2 * y * y * (y + 6 * (pr.m - 2)) / pr.a**3
    flat = is_bach_flat(pr)
    smooth = all(r == 0 for r in pr.smoothness_residuals())
    if flat and smooth and s1 != s2:
        raise DefectError(f"Einstein constant forms disagree: {rat_str(s1)} vs {rat_str(s2)}")
    return EinsteinConstant(s1, s1, s2, flat)


@dataclass(frozen=True)
class VanishingLocus:
    kind: str  # IdenticallyZero | ConstantNonzero | VanishesAt | NeverVanishes
    r_star: Scalar | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.r_star is not None:
            out["r_star"] = rat_str(self.r_star)
        return out


def vanishing_locus(pr: Profile) -> VanishingLocus:
    """Where scal = 2 q3 + q4 r vanishes on r >= a."""
    sc = scalar_curvature(pr)
    if sc.A1 == 0:
        return VanishingLocus("IdenticallyZero" if sc.A0 == 0 else "ConstantNonzero")
    r_star = -sc.A0 / sc.A1
    if r_star > pr.a:
        return VanishingLocus("VanishesAt", r_star)
    return VanishingLocus("NeverVanishes")
