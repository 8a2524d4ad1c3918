"""Bach-flatness quadratic A p^2 + B p + C = 0 for the cone weight on H_m.

Roots are returned exactly: rational when the discriminant is a square,
otherwise as elements of Q(sqrt(disc)).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .ansatz import cone_affine_coefficients, profile_from_cone, scalar_curvature
from .errors import DegeneratePolytopeError, DomainError, NoSolutionError, ParameterError
from .exactpoly import Poly, RatFunc, parse_rat, rat_str, real_roots_above
from .surd import Surd, sqrt_rat, to_mpf

__all__ = [
    "ConeQuadratic",
    "Admissibility",
    "AsymptoticsReport",
    "cone_abc",
    "cone_quadratic",
    "discriminant_bracket",
    "m1_x0",
    "m1_weights",
    "admissibility_bounds",
    "admissibility",
    "direct_scal_verdict",
    "weight_asymptotics",
    "limit_profiles",
    "matching_y",
    "sweep_rows",
    "SWEEP_COLUMNS",
]

X = Poly.x()


def cone_abc(m: int, x):
    """Coefficients of the quadratic; x may be a number or a Poly in x."""
    A = (3 * x * x * m + 2 * x**3 + 3 * x * m - 2) * (x * m + m - 2 * x + 2)
    B = -m * ((m - 2) * x**4 + (2 * m + 4) * x**3 + 6 * x * x * m + (2 * m - 4) * x + m + 2)
    C = 3 * m * m * x * (x + 1) ** 2
    return A, B, C


def discriminant_bracket(m: int) -> Poly:
    """Quartic Q4 with B^2 - 4AC = m^2 (x^2+4x+1)^2 Q4."""
    return (
        (m - 2) ** 2 * X**4
        - 4 * m * (m - 2) * X**3
        - 2 * (3 * m * m + 4) * X**2
        - 4 * m * (m + 2) * X
        + (m + 2) ** 2
    )


@dataclass(frozen=True)
class ConeQuadratic:
    m: int
    x: Fraction
    A: Fraction
    B: Fraction
    C: Fraction
    discriminant: Fraction
    roots: dict = field(default_factory=dict)  # label -> exact root (plus/minus/double/linear)

    @property
    def weights(self) -> list:
        """Positive roots, ascending."""
        vals = {v for v in self.roots.values() if v > 0}
        return sorted(vals, key=to_mpf)

    @property
    def p_plus(self):
        return self.roots.get("plus", self.roots.get("double", self.roots.get("linear")))

    @property
    def p_minus(self):
        return self.roots.get("minus", self.roots.get("double"))

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "x": rat_str(self.x),
            "A": rat_str(self.A),
            "B": rat_str(self.B),
            "C": rat_str(self.C),
            "discriminant": rat_str(self.discriminant),
            "roots": {k: {"exact": rat_str(v), "approx": mpmath.nstr(to_mpf(v), 20)} for k, v in self.roots.items()},
            "weights": [rat_str(w) for w in self.weights],
        }


def _check_mx(m, x) -> tuple[int, Fraction]:
    if not isinstance(m, int) or isinstance(m, bool) or m <= 0:
        raise ParameterError(f"m must be a positive integer, got {m!r}")
    try:
        x = parse_rat(x)
    except ValueError as exc:
        raise ParameterError(str(exc)) from exc
    if x <= 1:
        raise DegeneratePolytopeError(f"degenerate polytope: x = {x} must exceed 1")
    return m, x


def cone_quadratic(m: int, x) -> ConeQuadratic:
    """Solve A p^2 + B p + C = 0 exactly.

    Root labels follow two conventions.  For m = 1 the branch called p_plus is
    (-B - sqrt(disc)) / (2A), which stays finite through A = 0 at x = 3 and
    equals 12/11 there.  For m >= 2 p_plus is (-B + sqrt(disc)) / (2A), the
    branch tending to m/2.
    """
    m, x = _check_mx(m, x)
    A, B, C = cone_abc(m, x)
    disc = B * B - 4 * A * C
    roots: dict = {}
    if A == 0:
        if B == 0:
            raise DomainError("degenerate quadratic: A = B = 0")
        roots["linear"] = -C / B
    elif disc == 0:
        roots["double"] = -B / (2 * A)
    elif disc > 0:
        s = sqrt_rat(disc)
        r_neg = (-B - s) / (2 * A)
        r_pos = (-B + s) / (2 * A)
        if m == 1:
            roots["plus"], roots["minus"] = r_neg, r_pos
        else:
            roots["plus"], roots["minus"] = r_pos, r_neg
    return ConeQuadratic(m, x, A, B, C, disc, roots)


def m1_x0():
    """Unique root above 1 of x^4 + 4x^3 - 14x^2 - 12x + 9 (the m = 1 discriminant bracket)."""
    roots = real_roots_above(discriminant_bracket(1), 1)
    if len(roots) != 1:
        raise DomainError("expected a unique root of the m = 1 bracket above 1")
    return roots[0]


def m1_weights(x, dps: int = 40) -> dict:
    """Closed-form m = 1 weights p_plus and p_minus (None where undefined).

    Exact inputs return exact values; float inputs are evaluated in mpmath.
    p_minus is defined only on [x0, 3).
    """
    exact = not isinstance(x, float)
    if exact:
        x = parse_rat(x)
        if x <= 1:
            raise DegeneratePolytopeError("x must exceed 1")
        if discriminant_bracket(1)(x) < 0:
            raise NoSolutionError(f"no Bach-flat weight for m = 1 at x = {x} (x < x0)")
        cq = cone_quadratic(1, x)
        plus = cq.p_plus
        minus = cq.p_minus if x < 3 else None
        return {"p_plus": plus, "p_minus": minus}
    with mpmath.workdps(dps):
        xm = mpmath.mpf(x)
        Q = xm**4 + 4 * xm**3 - 14 * xm**2 - 12 * xm + 9
        if xm <= 1 or Q < 0:
            raise NoSolutionError(f"no Bach-flat weight for m = 1 at x = {x}")
        A, B, _ = cone_abc(1, xm)
        root = (xm * xm + 4 * xm + 1) * mpmath.sqrt(Q)
        # p_plus = (-B - sqrt(disc)) / (2A), written in the form that is regular at A = 0
        C = 3 * xm * (xm + 1) ** 2
        plus = 2 * C / (-B + root)
        minus = (-B + root) / (2 * A) if xm < 3 else None
        return {"p_plus": plus, "p_minus": minus}


# ---------------------------------------------------------------------------
# admissibility


@dataclass(frozen=True)
class Admissibility:
    m: int
    x: Fraction
    weight: object
    r1: Fraction
    r2: Fraction | None
    d: Fraction
    verdict: str  # NowhereVanishing | ConstantScal | VanishesInside

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "x": rat_str(self.x),
            "weight": rat_str(self.weight),
            "r1": rat_str(self.r1),
            "r2": None if self.r2 is None else rat_str(self.r2),
            "d": rat_str(self.d),
            "verdict": self.verdict,
        }


def admissibility_bounds(m: int, x) -> tuple[Fraction, Fraction | None, Fraction]:
    """The three rational functions r1, r2, d of (m, x); r2 is None where its denominator vanishes."""
    x = Fraction(x)
    r1 = m * x * (x + 1) / (2 * x * (x - 1) + m * (3 * x + 1))
    den2 = 2 - 2 * x + m * (x + 1)
    r2 = None if den2 == 0 else m * x * (x + 3) / den2
    d = m * x * (x + 2) / ((x - 1) ** 2 + m * (2 * x + 1))
    return r1, r2, d


def admissibility(m: int, x, weight) -> Admissibility:
    m, x = _check_mx(m, x)
    if not isinstance(weight, Surd):
        weight = parse_rat(weight)
    if weight <= 0:
        raise ParameterError("weight must be positive")
    r1, r2, d = admissibility_bounds(m, x)
    if weight == d:
        verdict = "ConstantScal"
    else:
        if m > 1 or x < 3:
            ok = r1 < weight < r2
        elif x == 3:
            ok = weight > Fraction(6, 11)
        else:
            ok = weight > r1
        verdict = "NowhereVanishing" if ok else "VanishesInside"
    return Admissibility(m, x, weight, r1, r2, d, verdict)


def direct_scal_verdict(m: int, x, weight) -> str:
    """Independent verdict: inspect scal = 2 q3 + q4 r of the cone profile on [a, b] directly."""
    cp = profile_from_cone(m, 1, x, weight)
    sc = scalar_curvature(cp.base)
    if sc.A1 == 0:
        return "ConstantScal" if sc.A0 != 0 else "VanishesInside"
    va, vb = sc(Fraction(1)), sc(cp.b)
    sa = va > 0
    sb = vb > 0
    if va == 0 or vb == 0 or sa != sb:
        return "VanishesInside"
    return "NowhereVanishing"


# ---------------------------------------------------------------------------
# x -> infinity behaviour


@dataclass(frozen=True)
class AsymptoticsReport:
    m: int
    rows: list  # (x, p_plus, p_minus, scaled remainder plus, scaled remainder minus)
    C_plus: float
    C_minus: float
    verified: bool

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "rows": [
                {"x": rat_str(r[0]), "p_plus": float(r[1]), "p_minus": float(r[2]), "x2_rem_plus": float(r[3]), "x2_rem_minus": float(r[4])}
                for r in self.rows
            ],
            "C_plus": self.C_plus,
            "C_minus": self.C_minus,
            "verified": self.verified,
        }


def _leading_plus(m: int, x):
    return Fraction(m, 2) - Fraction(3 * m**3 - 8 * m**2 + 8 * m, 4 * m - 8) / x


def _leading_minus(m: int, x):
    return Fraction(3 * m, m - 2) / x


def weight_asymptotics(m: int, xs: Sequence = (100, 1000)) -> AsymptoticsReport:
    """Compare exact p_plus, p_minus with their two-term / one-term expansions.

    C is the largest x^2 |remainder| on the grid; the check passes when every
    grid point satisfies |remainder| <= C / x^2 with C bounded independently of x,
    which is judged by the scaled remainders agreeing within a factor of two.
    """
    if m < 3:
        raise ParameterError("weight asymptotics are for m >= 3")
    rows = []
    with mpmath.workdps(50):
        for x in xs:
            x = parse_rat(x)
            if x < 100:
                raise ParameterError("asymptotic grid needs x >= 100")
            cq = cone_quadratic(m, x)
            pp, pm = to_mpf(cq.p_plus), to_mpf(cq.p_minus)
            xf = to_mpf(x)
            rp = abs(pp - to_mpf(_leading_plus(m, x))) * xf**2
            rm = abs(pm - to_mpf(_leading_minus(m, x))) * xf**2
            rows.append((x, pp, pm, rp, rm))
    Cp = max(float(r[3]) for r in rows)
    Cm = max(float(r[4]) for r in rows)
    ok = all(float(r[3]) <= Cp and float(r[4]) <= Cm for r in rows)
    ok = ok and min(float(r[3]) for r in rows) * 2 >= Cp and min(float(r[4]) for r in rows) * 2 >= Cm
    return AsymptoticsReport(m, rows, Cp, Cm, ok)


def limit_profiles(m: int) -> dict:
    """Exact x -> infinity limits of the scale-free profile along p_plus ~ m/2 + c/x and p_minus ~ 3m/((m-2)x)."""
    if m < 3:
        raise ParameterError("limit profiles are for m >= 3")
    xr = RatFunc(X)
    u, v = cone_affine_coefficients(m, Fraction(1), xr)
    c1 = -Fraction(3 * m**3 - 8 * m**2 + 8 * m, 4 * m - 8)
    branches = {
        "plus": RatFunc(Fraction(m, 2)) + RatFunc(c1) / xr,
        "minus": RatFunc(Fraction(3 * m, m - 2)) / xr,
    }
    out = {}
    for name, p in branches.items():
        w = 1 / p
        q = [(ui + vi * w).limit_at_infinity() for ui, vi in zip(u, v)]
        q0, q1, q3, q4 = q
        out[name] = Poly([0, 0, 1]) - Poly([q0, q1, 0, q3 / 6, q4 / 24])
    return out


def matching_y(m: int, x, weight):
    """y = a s(a) of the cone profile written as a closed form in (m, x, weight)."""
    x = parse_rat(x)
    p = weight if isinstance(weight, Surd) else parse_rat(weight)
    den = (x * x + 4 * x + 1) * (x - 1) * p
    if den == 0:
        raise DomainError("matching formula undefined")
    return 12 * ((2 * p - m) * x * x + ((3 * m - 2) * p - m) * x + m * p) / den


# ---------------------------------------------------------------------------
# sweeps

SWEEP_COLUMNS = ["m", "x", "A", "B", "C", "disc", "p_minus", "p_plus", "r1", "r2", "d", "verdict_minus", "verdict_plus"]


def sweep_rows(ms: Iterable[int], xs: Iterable) -> list[dict]:
    rows = []
    xs = [parse_rat(x) for x in xs]
    for m in ms:
        for x in xs:
            cq = cone_quadratic(m, x)
            r1, r2, d = admissibility_bounds(m, x)
            row = {
                "m": m,
                "x": rat_str(x),
                "A": rat_str(cq.A),
                "B": rat_str(cq.B),
                "C": rat_str(cq.C),
                "disc": rat_str(cq.discriminant),
                "r1": rat_str(r1),
                "r2": "" if r2 is None else rat_str(r2),
                "d": rat_str(d),
            }
            for lab, val in (("minus", cq.p_minus), ("plus", cq.p_plus)):
                if val is None:
                    row[f"p_{lab}"] = ""
                    row[f"verdict_{lab}"] = "none"
                elif val <= 0:
                    row[f"p_{lab}"] = mpmath.nstr(to_mpf(val), 20)
                    row[f"verdict_{lab}"] = "nonpositive"
                else:
                    row[f"p_{lab}"] = mpmath.nstr(to_mpf(val), 20)
                    row[f"verdict_{lab}"] = admissibility(m, x, val).verdict
            rows.append(row)
    return rows


def rows_to_csv(rows: list[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()
