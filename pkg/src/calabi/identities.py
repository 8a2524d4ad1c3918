"""Named suites of exact polynomial identities behind the closed-form data.

Each entry pairs a printed form with, where the printed form is wrong, the
corrected form established by expansion.  Two-variable identities are handled
as polynomials in an outer variable whose coefficients are polynomials in the
inner one, so every check is a finite exact expansion per integer m.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .exactpoly import IdentityReport, Poly, RatFunc, discriminant, identity_check
from .conesolver import cone_abc, discriminant_bracket

__all__ = ["SuiteEntry", "SUITES", "run_suite", "suite_names"]

X = Poly.x()
DEFAULT_MS = tuple(range(1, 13))


def _outer(inner: Poly) -> Poly:
    """Embed a polynomial in the inner variable as a constant of the outer one."""
    return Poly([inner])


OUT = Poly([0, Poly([1])])  # the outer variable
XI = _outer(X)  # the inner variable seen from outside


@dataclass(frozen=True)
class SuiteEntry:
    name: str
    lhs: Callable[[int], Poly]
    rhs: Callable[[int], Poly]
    expect: bool  # whether the identity should hold
    note: str = ""
    ms: tuple = DEFAULT_MS

    def run(self, ms=None) -> IdentityReport:
        return identity_check(self.lhs, self.rhs, self.ms if ms is None else ms, name=self.name)


# ---------------------------------------------------------------------------
# cone quadratic


def _disc(m):
    A, B, C = cone_abc(m, X)
    return B * B - 4 * A * C


def _cone_numerators(m):
    x, P = XI, OUT
    N0 = (P * (m - 1) * x**2 + ((2 * m + 2) * P - 2 * m) * x - m - P) * x * x
    N1 = -(P * (m - 2) * x**3 + ((2 * m + 2) * P - 3 * m) * x**2 + ((3 * m + 2) * P - 2 * m) * x - m - 2 * P) * x
    N3 = 6 * (2 * P - m) * x**3 + ((18 * m - 12) * P - 12 * m) * x**2 + (12 * (m - 1) * P - 18 * m) * x + 6 * P * (m + 2)
    N4 = 24 * (m - P) * x**2 + ((1 - m) * P + m) * 48 * x - 24 * (m + 1) * P
    return N0, N1, N3, N4


def _bach_numerator(m):
    N0, N1, N3, N4 = _cone_numerators(m)
    return N3 * N1 - N4 * N0


def _bach_quadratic(m):
    A, B, C = cone_abc(m, XI)
    x, P = XI, OUT
    return -6 * x * (x - 1) ** 2 * (A * P * P + B * P + C)


def _q4_numerator(m):
    return _cone_numerators(m)[3]


def _constant_scal_locus(m):
    # q4 = 0 exactly at p = d = m x (x+2) / ((x-1)^2 + m (2x+1))
    x, P = XI, OUT
    return -24 * (P * ((x - 1) ** 2 + m * (2 * x + 1)) - m * x * (x + 2))


CONE_DISC = [
    SuiteEntry(
        "disc = m^2 (x^2+4x+1)^2 Q4",
        _disc,
        lambda m: m * m * (X * X + 4 * X + 1) ** 2 * discriminant_bracket(m),
        True,
        "corrected prefactor",
        tuple(range(1, 11)),
    ),
    SuiteEntry(
        "disc = 36 m^2 x^2 (x^2+4x+1)^2 Q4 (printed)",
        _disc,
        lambda m: 36 * m * m * X * X * (X * X + 4 * X + 1) ** 2 * discriminant_bracket(m),
        False,
        "printed prefactor 36 x^2 is spurious",
        tuple(range(1, 11)),
    ),
    SuiteEntry(
        "Q4 at m = 2 equals -32x^2 - 32x + 16",
        lambda m: discriminant_bracket(2),
        lambda m: -32 * X * X - 32 * X + 16,
        True,
        ms=(2,),
    ),
    SuiteEntry(
        "Q4 at m = 1 equals x^4 + 4x^3 - 14x^2 - 12x + 9",
        lambda m: discriminant_bracket(1),
        lambda m: X**4 + 4 * X**3 - 14 * X**2 - 12 * X + 9,
        True,
        ms=(1,),
    ),
    SuiteEntry(
        "cone Bach numerator = -6x(x-1)^2 (A p^2 + B p + C)",
        _bach_numerator,
        _bach_quadratic,
        True,
        "numerators of q3 q1 - q4 q0 over p^2 (x-1)^4 (x^2+4x+1)^2",
        tuple(range(1, 9)),
    ),
    SuiteEntry(
        "q4 numerator vanishes exactly at p = d",
        _q4_numerator,
        _constant_scal_locus,
        True,
        ms=tuple(range(1, 9)),
    ),
]


# ---------------------------------------------------------------------------
# convexity appendix


def _K1(m, x=X):
    return x**3 + (m - 3) * x**2 - (5 * m - 3) * x - (2 * m + 1)


def _K2(m, x=X):
    return x**3 + 3 * (m - 1) * x**2 + 3 * (m + 1) * x - 1


def _Kd(m, x=X):
    return x**2 + 2 * (m - 1) * x + m + 1


def script_A(m, x=X):
    return _K2(m, x) ** 2


def script_B(m, x=X):
    return 3 * (x + 1) * (x - 1) ** 3 - m * (2 * x**4 + 7 * x**3 + 18 * x**2 + 7 * x + 2)


def script_C(m, x=X):
    return 9 * (x + 1) ** 2


def _closing_lhs(m):
    return (X + 2) ** 2 * script_A(m) + 2 * (X + 2) * _Kd(m) * script_B(m) + _Kd(m) ** 2 * script_C(m)


TRUE_CUBIC = X**3 + 3 * X**2 - 3 * X - 1  # = (x-1)(x^2+4x+1)
PRINTED_CUBIC = X**3 + 3 * X**2 - 3 * X + 1


def _alpha_beta_numerators(m):
    # alpha * D and beta * D with a = 1, as polynomials in p over Q[x]
    x, P = XI, OUT
    D = m * x * (x + 2) - P * _Kd(m, x)
    aD = (x - 1) * (m * x + P * (x * x + m * x - 1))
    bD = x * (-m * (2 * x + 1) + P * ((m - 1) * x * x + (2 * m + 2) * x - 1))
    return aD, bD, D


def _beta_from_cone(m):
    # beta = 24 q0 / (q4 a b) from the constant term of p; with N4 = 24 D this is N0 / x
    N0, _, _, N4 = _cone_numerators(m)
    _, _, D = _alpha_beta_numerators(m)
    if N4 != 24 * D:
        raise ArithmeticError("q4 numerator is not 24 D")
    return N0 / XI


def _printed_beta_numerator(m):
    x, P = XI, OUT
    return x * (-m * (2 * x + 1) + P * ((m - 1) * x * x + (2 * m + 1) * x - 1))


def _disc_alpha_beta(m):
    aD, bD, D = _alpha_beta_numerators(m)
    return aD * aD - 4 * bD * D


def _disc_alpha_beta_rhs(m):
    x, P = XI, OUT
    return script_A(m, x) * P * P + 2 * m * x * script_B(m, x) * P + m * m * x * x * script_C(m, x)


APPENDIX_A = [
    SuiteEntry(
        "beta D = x(-m(2x+1) + p((m-1)x^2 + (2m+2)x - 1))",
        lambda m: _alpha_beta_numerators(m)[1],
        lambda m: _beta_from_cone(m),
        True,
        "corrected linear coefficient (2m+2)x",
        tuple(range(1, 7)),
    ),
    SuiteEntry(
        "beta D = x(-m(2x+1) + p((m-1)x^2 + (2m+1)x - 1)) (printed)",
        _printed_beta_numerator,
        lambda m: _beta_from_cone(m),
        False,
        "printed (2m+1)x does not match the cone profile",
        tuple(range(1, 7)),
    ),
    SuiteEntry(
        "alpha^2 - 4 beta = (A p^2 + 2 m x B p + m^2 x^2 C) / D^2",
        _disc_alpha_beta,
        _disc_alpha_beta_rhs,
        True,
        ms=tuple(range(1, 9)),
    ),
    SuiteEntry(
        "d <= r2 bracket = (x^3+3x^2-3x-1)(x+m-1)",
        lambda m: (2 * X**2 + 5 * X - 1) * _Kd(m) - _K2(m) * (X + 2),
        lambda m: TRUE_CUBIC * (X + m - 1),
        True,
        "resolved sign: -3x-1",
        tuple(range(1, 9)),
    ),
    SuiteEntry(
        "d <= r2 bracket = (x^3+3x^2-3x+1)(x+m-1) (printed)",
        lambda m: (2 * X**2 + 5 * X - 1) * _Kd(m) - _K2(m) * (X + 2),
        lambda m: PRINTED_CUBIC * (X + m - 1),
        False,
        "printed +1 is a sign slip",
        tuple(range(1, 9)),
    ),
    SuiteEntry(
        "d <= r1 bracket = (x^3+3x^2-3x-1)(x+m-1)",
        lambda m: 3 * (X + 1) * _Kd(m) + (X + 2) * _K1(m),
        lambda m: TRUE_CUBIC * (X + m - 1),
        True,
        "resolved sign: -3x-1",
        tuple(range(1, 9)),
    ),
    SuiteEntry(
        "closing identity = (x^3+3x^2-3x-1)^2 (x+m-1)^2",
        _closing_lhs,
        lambda m: TRUE_CUBIC**2 * (X + m - 1) ** 2,
        True,
        "resolved sign: -3x-1",
        tuple(range(1, 9)),
    ),
    SuiteEntry(
        "closing identity = (x^3+3x^2-3x+1)^2 (x+m-1)^2 (sign variant)",
        _closing_lhs,
        lambda m: PRINTED_CUBIC**2 * (X + m - 1) ** 2,
        False,
        "the +1 variant fails",
        tuple(range(1, 9)),
    ),
    SuiteEntry(
        "C = 9 (x+1)^2",
        lambda m: script_C(m),
        lambda m: 9 * (X + 1) ** 2,
        True,
        ms=tuple(range(1, 9)),
    ),
]


# ---------------------------------------------------------------------------
# atlas appendix


def v_poly(m):
    Y = X
    return Y**3 + 6 * (3 * m - 2) * Y**2 + 72 * m * (m - 2) * Y + 256


def _pmy(m):
    """p_{m,y}(tau) as a polynomial in tau with coefficients in Q[y]."""
    y, T = XI, OUT
    return y * (y + 4 * (m - 2)) * T**3 + 2 * y * (y - 8) * T**2 + 24 * m * (4 - y) * T + 96 * m * m


def _local_p_tilde(m):
    """p~(t) from the local coefficient formulas with a = 1, s(a) = y, as a polynomial in t over Q[y]."""
    y, T = XI, OUT
    q0 = (y + 8 * m - 8) * (y + 12 * m) / (96 * m)
    q1 = -(y + 4 * m - 8) * (y + 12 * m) / (48 * m)
    q3 = y * (y + 8 * m - 8) / (8 * m)
    q4 = -y * (y + 4 * m - 8) / (4 * m)
    return T * T - (q0 + q1 * T + q3 / 6 * T**3 + q4 / 24 * T**4)


def _pmy_shifted(m):
    # (t - 1) * p_{m,y}(t - 1) / (96 m); Horner by hand so inner coefficients stay inner
    T = OUT
    acc = Poly()
    for c in reversed(_pmy(m).coeffs):
        acc = acc * (T - 1) + _outer(c if isinstance(c, Poly) else Poly([c]))
    return (T - 1) * acc / (96 * m)


def _pmy_disc(m):
    """Discriminant of p_{m,y} in tau, computed over Q(y)."""
    y = RatFunc(X)
    coeffs = [y * 0 + 96 * m * m, 24 * m * (4 - y), 2 * y * (y - 8), y * (y + 4 * (m - 2))]
    d = discriminant(Poly(coeffs))
    if d.den != Poly([1]):
        raise ArithmeticError("discriminant is not polynomial in y")
    return d.num


def _s_cubic_disc(m):
    """Discriminant of y^2 p_{m,y}(s / y), the same cubic in the variable s = y (t - 1)."""
    y = RatFunc(X)
    coeffs = [96 * m * m * y * y, -24 * m * y * (y - 4), 2 * y * y - 16 * y, y + (4 * m - 8)]
    d = discriminant(Poly(coeffs))
    if d.den != Poly([1]):
        raise ArithmeticError("discriminant is not polynomial in y")
    return d.num


def _pmy_disc_rhs(m, power=1):
    Y = X
    return -768 * m * m * Y**power * (6 * (m - 2) + Y) * (12 * m + Y) * v_poly(m)


APPENDIX_B = [
    SuiteEntry("v(-12m) = 256", lambda m: v_poly(m)(Fraction(-12 * m)), lambda m: Poly([256]), True, ms=tuple(range(3, 13))),
    SuiteEntry("v(-6(m-2)) = 256", lambda m: v_poly(m)(Fraction(-6 * (m - 2))), lambda m: Poly([256]), True, ms=tuple(range(3, 13))),
    SuiteEntry("v(0) = 256", lambda m: v_poly(m)(Fraction(0)), lambda m: Poly([256]), True, ms=tuple(range(3, 13))),
    SuiteEntry(
        "v(-4(m-2)) = -64 m^2 (m-3)",
        lambda m: v_poly(m)(Fraction(-4 * (m - 2))),
        lambda m: Poly([-64 * m * m * (m - 3)]),
        True,
        "vanishes at m = 3, so y2 = -4(m-2) there",
        tuple(range(3, 13)),
    ),
    SuiteEntry(
        "p~(t) = (t-1) p_{m,y}(t-1) / (96 m)",
        _local_p_tilde,
        _pmy_shifted,
        True,
        ms=tuple(range(1, 13)),
    ),
    SuiteEntry(
        "disc_tau p_{m,y} = -768 m^2 y (y+6(m-2)) (y+12m) v(y)",
        _pmy_disc,
        _pmy_disc_rhs,
        True,
        "single power of y",
        tuple(range(3, 9)),
    ),
    SuiteEntry(
        "disc_s of the cubic in s = y(t-1) = -768 m^2 y^3 (y+6(m-2)) (y+12m) v(y)",
        _s_cubic_disc,
        lambda m: _pmy_disc_rhs(m, 3),
        True,
        "rescaling tau = s / y contributes y^2",
        tuple(range(3, 9)),
    ),
]


# ---------------------------------------------------------------------------
# scalar-curvature / Einstein-constant formulas


def _local_q(m):
    """(q0, q1, q3, q4) in Q[y] with a = 1, s(a) = y."""
    y = X
    q0 = (y + 8 * m - 8) * (y + 12 * m) / (96 * m)
    q1 = -(y + 4 * m - 8) * (y + 12 * m) / (48 * m)
    q3 = y * (y + 8 * m - 8) / (8 * m)
    q4 = -y * (y + 4 * m - 8) / (4 * m)
    return q0, q1, q3, q4


def _S_coeff(m):
    q0, q1, q3, q4 = _local_q(m)
    return 12 * q4 * q4 * q1 + 8 * q3**3 + 48 * q3 * q4


def _scal_forms(m):
    # as polynomials in r over Q[y]: 2 q3 + q4 r  and the y-form
    q0, q1, q3, q4 = _local_q(m)
    y, R = XI, OUT
    return 2 * _outer(q3) + _outer(q4) * R, (y / (4 * m)) * (y + 8 * (m - 1) - (y + 4 * (m - 2)) * R)


S_FORMULAS = [
    SuiteEntry(
        "local profile is Bach-flat: q3 q1 - q4 q0 = 0",
        lambda m: (lambda q: q[2] * q[1] - q[3] * q[0])(_local_q(m)),
        lambda m: Poly(),
        True,
    ),
    SuiteEntry(
        "local profile closes smoothly: p(1) = 0",
        lambda m: (lambda q: 1 - (q[0] + q[1] + q[2] / 6 + q[3] / 24))(_local_q(m)),
        lambda m: Poly(),
        True,
    ),
    SuiteEntry(
        "local profile closes smoothly: p'(1) = m",
        lambda m: (lambda q: 2 - (q[1] + q[2] / 2 + q[3] / 6))(_local_q(m)),
        lambda m: Poly([m]),
        True,
    ),
    SuiteEntry(
        "scal: 2 q3 + q4 r equals the y-form",
        lambda m: _scal_forms(m)[0],
        lambda m: _scal_forms(m)[1],
        True,
    ),
    SuiteEntry(
        "S = 12 q4^2 q1 + 8 q3^3 + 48 q3 q4 = -2 y^2 (y + 6(m-2))",
        _S_coeff,
        lambda m: -2 * X * X * (X + 6 * (m - 2)),
        True,
        "a = 1; corrected factor 2",
    ),
    SuiteEntry(
        "S = -y^2 (y + 6(m-2)) (printed y-form)",
        _S_coeff,
        lambda m: -X * X * (X + 6 * (m - 2)),
        False,
        "printed y-form is off by a factor 2",
    ),
    SuiteEntry(
        "limit y = -4(m-2): constant term a^2 q0 = (m+1)/3",
        lambda m: _local_q(m)[0](Fraction(-4 * (m - 2))),
        lambda m: Poly([Fraction(m + 1, 3)]),
        True,
    ),
    SuiteEntry(
        "limit y = -4(m-2): constant term a^2 q0 = (m+1)/2 (printed)",
        lambda m: _local_q(m)[0](Fraction(-4 * (m - 2))),
        lambda m: Poly([Fraction(m + 1, 2)]),
        False,
        "printed (m+1)/2; exact value (m+1)/3",
        tuple(range(3, 13)),
    ),
]


SUITES = {
    "coneDisc": CONE_DISC,
    "appendixA": APPENDIX_A,
    "appendixB": APPENDIX_B,
    "sFormulas": S_FORMULAS,
}


def suite_names() -> list[str]:
    return list(SUITES)


def run_suite(name: str, ms=None) -> list[tuple[SuiteEntry, IdentityReport]]:
    """Evaluate every entry; an entry passes when the identity's truth matches ``expect``."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {suite_names()}")
    return [(e, e.run(ms)) for e in SUITES[name]]
