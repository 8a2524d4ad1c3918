"""Positivity of p on (a, b), i.e. convexity of the symplectic potential.

The decision path is exact root isolation.  The closed-form case analysis
(alpha, beta, the brackets A, B, C and the three sign tables) is kept as a
redundant cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .ansatz import ConeProfile, Profile, profile_from_cone
from .errors import ConvexityError, DefectError, DegeneratePolytopeError, ParameterError
from .exactpoly import IsolatedRoot, Poly, interval_eval, parse_rat, rat_str, real_roots, simplest_between
from .surd import Surd, sqrt_rat, to_mpf

__all__ = [
    "PositivityCertificate",
    "certify_positive",
    "AppendixAQuantities",
    "appendixA_quantities",
    "sign_table",
    "PRINTED_SIGN_TABLES",
    "hessian_u",
    "hessian_identities",
]


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class PositivityCertificate:
    method: str  # root-free-interval | grid-witness
    positive: bool
    a: Fraction
    b: Fraction
    p_poly: Poly = field(repr=False)
    interior_roots: tuple = ()
    witness: object = None  # rational point with p <= 0, when one was found
    ends: dict = field(default_factory=dict)

    def recheck(self, n: int = 1000) -> bool:
        """Evaluate p exactly at n interior grid points and confirm the verdict."""
        p = self.p_poly
        step = (self.b - self.a) / (n + 1)
        values = [p(self.a + k * step) for k in range(1, n + 1)]
        if self.positive:
            return all(v > 0 for v in values)
        if self.witness is not None:
            return not p(self.witness) > 0
        return bool(self.interior_roots)

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "positive": self.positive,
            "interval": [rat_str(self.a), rat_str(self.b)],
            "interior_roots": [r.to_json() for r in self.interior_roots],
            "witness": None if self.witness is None else rat_str(self.witness),
            "ends": {k: rat_str(v) for k, v in self.ends.items()},
        }


def _split_surd_poly(p: Poly):
    """Write p = A + sqrt(rad) B with rational A, B; rad is None if p is rational."""
    rad = None
    for c in p.coeffs:
        if isinstance(c, Surd):
            rad = c.rad
            break
    if rad is None:
        return p, Poly(), None
    A = Poly([c.alpha if isinstance(c, Surd) else c for c in p.coeffs])
    B = Poly([c.beta if isinstance(c, Surd) else 0 for c in p.coeffs])
    return A, B, rad


def _sqrt_bounds(rad: int, k: int) -> tuple[Fraction, Fraction]:
    scale = 10**k
    r = isqrt(rad * scale * scale)
    return Fraction(r, scale), Fraction(r + 1, scale)


def _mul_iv(u, v):
    prods = (u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1])
    return min(prods), max(prods)


def _surd_poly_enclosure(A, B, rad, sgn, lo, hi, k):
    ea = interval_eval(A, lo, hi)
    eb = interval_eval(B, lo, hi)
    s = _sqrt_bounds(rad, k)
    s = (s[0], s[1]) if sgn > 0 else (-s[1], -s[0])
    prod = _mul_iv(eb, s)
    return ea[0] + prod[0], ea[1] + prod[1]


def _roots_of_surd_poly(p: Poly, lo, hi) -> list[IsolatedRoot]:
    """Roots in (lo, hi) of a polynomial over Q(sqrt(rad)), via its rational norm."""
    A, B, rad = _split_surd_poly(p)
    if rad is None:
        return real_roots(p, lo, hi)
    common = A.gcd(B)
    out = list(real_roots(common, lo, hi)) if common.degree > 0 else []
    norm = A * A - rad * (B * B)
    for r in real_roots(norm, lo, hi):
        if any(c.compare(r.lo) <= 0 <= c.compare(r.hi) for c in out):
            continue
        if r.exact is not None:
            if p(r.exact) == 0:
                out.append(r)
            continue
        cur, k = r, 8
        for _ in range(200):
            mine = _surd_poly_enclosure(A, B, rad, 1, cur.lo, cur.hi, k)
            other = _surd_poly_enclosure(A, B, rad, -1, cur.lo, cur.hi, k)
            if mine[0] > 0 or mine[1] < 0:
                break
            if other[0] > 0 or other[1] < 0:
                out.append(cur)
                break
            cur = cur.refine(cur.width / 16)
            k += 2
        else:
            raise ConvexityError("could not attribute a root of the norm polynomial", r.lo)
    out.sort(key=lambda r: (r.lo, r.hi))
    return out


def _inside(u, v) -> Fraction:
    """Simple rational strictly between u < v."""
    w = (v - u) / 4
    return simplest_between(u + w, v - w)


def _witness(p: Poly, a, b, roots) -> Fraction | None:
    cuts = [a]
    for r in roots:
        if r.is_rational:
            if not p(r.exact) > 0:
                return r.exact
        cuts += [r.lo, r.hi]
    cuts.append(b)
    for u, v in zip(cuts, cuts[1:]):
        if u < v:
            t = _inside(u, v)
            if a < t < b and not p(t) > 0:
                return t
    return None


def certify_positive(cp, b=None) -> PositivityCertificate:
    """Certify p > 0 on (a, b) by exact root isolation.

    ``cp`` is a ConeProfile, or a Profile together with the far end ``b``.
    """
    if isinstance(cp, ConeProfile):
        pr, b = cp.base, cp.b
    elif isinstance(cp, Profile):
        if b is None:
            raise ParameterError("a bare Profile needs the far end b")
        pr, b = cp, parse_rat(b)
    else:
        raise ParameterError("expected ConeProfile or Profile")
    a = pr.a
    if not b > a:
        raise DegeneratePolytopeError("need b > a")
    p = pr.p_poly
    dp = p.derivative()
    ends = {"p(a)": p(a), "p'(a)": dp(a), "p(b)": p(b), "p'(b)": dp(b)}
    roots = tuple(_roots_of_surd_poly(p, a, b))
    if not roots:
        mid = _inside(a, b)
        if p(mid) > 0:
            return PositivityCertificate("root-free-interval", True, a, b, p, (), None, ends)
        return PositivityCertificate("grid-witness", False, a, b, p, (), mid, ends)
    return PositivityCertificate("grid-witness", False, a, b, p, roots, _witness(p, a, b, roots), ends)


# ---------------------------------------------------------------------------
# closed-form machinery


def _K1(m, x):
    return x**3 + (m - 3) * x**2 - (5 * m - 3) * x - (2 * m + 1)


def _K2(m, x):
    return x**3 + 3 * (m - 1) * x**2 + 3 * (m + 1) * x - 1


def _Kd(m, x):
    return x * x + 2 * (m - 1) * x + m + 1


def _script(m, x):
    A = _K2(m, x) ** 2
    B = 3 * (x + 1) * (x - 1) ** 3 - m * (2 * x**4 + 7 * x**3 + 18 * x**2 + 7 * x + 2)
    C = 9 * (x + 1) ** 2
    return A, B, C


def _N(m, x, p):
    N1 = -3 * m * x * (x + 1) - p * _K1(m, x)
    N2 = m * x * (2 * x * x + 5 * x - 1) - p * _K2(m, x)
    D = m * x * (x + 2) - p * _Kd(m, x)
    return N1, N2, D


def _alpha_beta(m, x, p, a):
    N1, N2, D = _N(m, x, p)
    alpha = a * (x - 1) * (m * x + p * (x * x + m * x - 1)) / D
    beta = a * a * x * (-m * (2 * x + 1) + p * ((m - 1) * x * x + (2 * m + 2) * x - 1)) / D
    return alpha, beta


def _alpha_beta_general(m, a, x, p, q4):
    """alpha, beta from the end conditions with q4 left symbolic."""
    b = a * x
    c = q4 / 24
    alpha = (b / p - a) * m / (c * (b - a) ** 2) - (a + b)
    beta = a * b * (1 + m * (p - 1) / (c * p * (b - a) ** 2))
    return alpha, beta


@dataclass(frozen=True)
class AppendixAQuantities:
    m: int
    x: Fraction
    weight: object
    a: Fraction
    alphaQ: object
    betaQ: object
    scriptA: Fraction
    scriptB: Fraction
    scriptC: Fraction
    rho1: object  # None unless B^2 - AC >= 0
    rho2: object
    r1: Fraction | None
    r2: Fraction | None
    d: Fraction
    N1: object
    N2: object
    D: object
    disc_identity: bool
    case: str
    degenerate: bool = False
    fallback: PositivityCertificate | None = None

    def to_json(self) -> dict:
        def s(v):
            return None if v is None else rat_str(v)

        return {
            "m": self.m,
            "x": s(self.x),
            "weight": s(self.weight),
            "a": s(self.a),
            "alphaQ": s(self.alphaQ),
            "betaQ": s(self.betaQ),
            "scriptA": s(self.scriptA),
            "scriptB": s(self.scriptB),
            "scriptC": s(self.scriptC),
            "rho1": s(self.rho1),
            "rho2": s(self.rho2),
            "r1": s(self.r1),
            "r2": s(self.r2),
            "d": s(self.d),
            "N1": s(self.N1),
            "N2": s(self.N2),
            "D": s(self.D),
            "disc_identity": self.disc_identity,
            "case": self.case,
            "degenerate": self.degenerate,
            "fallback": None if self.fallback is None else self.fallback.to_json(),
        }


def _rhos(m, x):
    A, B, C = _script(m, x)
    disc = B * B - A * C
    if disc < 0:
        return None, None
    s = sqrt_rat(disc)
    return m * x * (-B - s) / A, m * x * (-B + s) / A


def _bounds(m, x):
    k1, k2 = _K1(m, x), _K2(m, x)
    r1 = None if k1 == 0 else -3 * (x + 1) * m * x / k1
    r2 = None if k2 == 0 else (2 * x * x + 5 * x - 1) * m * x / k2
    d = (x + 2) * m * x / _Kd(m, x)
    return r1, r2, d


def _case(r1, r2) -> str:
    if r1 is None or r1 < 0:
        return "r1<0"
    return "r1>0,r1<r2" if r1 < r2 else "r1>0,r2<r1"


def appendixA_quantities(m: int, x, weight, a=1) -> AppendixAQuantities:
    """Evaluate the closed forms at (m, x, weight) and cross-check them against the cone profile."""
    if not isinstance(m, int) or m <= 0:
        raise ParameterError("m must be a positive integer")
    x = parse_rat(x)
    a = parse_rat(a)
    if x <= 1:
        raise DegeneratePolytopeError(f"degenerate polytope: x = {x} must exceed 1")
    if not isinstance(weight, Surd):
        weight = parse_rat(weight)
    if not weight > 0:
        raise ParameterError("weight must be positive")
    A, B, C = _script(m, x)
    rho1, rho2 = _rhos(m, x)
    r1, r2, d = _bounds(m, x)
    N1, N2, D = _N(m, x, weight)
    case = _case(r1, r2)
    cp = profile_from_cone(m, a, x, weight)
    if D == 0 or cp.base.q4 == 0:
        cert = certify_positive(cp)
        return AppendixAQuantities(
            m, x, weight, a, None, None, A, B, C, rho1, rho2, r1, r2, d, N1, N2, D, False, case, True, cert
        )
    alpha, beta = _alpha_beta(m, x, weight, a)
    g_alpha, g_beta = _alpha_beta_general(m, a, x, weight, cp.base.q4)
    if g_alpha != alpha or g_beta != beta:
        raise DefectError("closed-form alpha, beta disagree with the cone profile")
    # p = (q4/24)(r-a)(b-r)(r^2 + alpha r + beta)
    quad = Poly([beta, alpha, 1])
    factored = (cp.base.q4 / 24) * Poly([-a, 1]) * Poly([cp.b, -1]) * quad
    if factored != cp.base.p_poly:
        raise DefectError("factorisation of p through alpha, beta failed")
    lhs = alpha * alpha - 4 * beta
    rhs = a * a * (A * weight * weight + 2 * m * x * B * weight + m * m * x * x * C) / (D * D)
    return AppendixAQuantities(
        m, x, weight, a, alpha, beta, A, B, C, rho1, rho2, r1, r2, d, N1, N2, D, lhs == rhs, case
    )


# ---------------------------------------------------------------------------
# sign tables

# rows over consecutive p-intervals to the right of 0, read off the three printed tables
PRINTED_SIGN_TABLES = {
    "r1<0": {
        "cuts": ("rho1", "rho2", "d", "r2"),
        "D": "+++--",
        "N1": "-----",
        "N2": "++++-",
        "disc": "+-+++",
        "N1/D": "---++",
        "N2/D": "+++-+",
        "D*disc": "+-+--",
    },
    "r1>0,r1<r2": {
        "cuts": ("rho1", "rho2", "d", "r1", "r2"),
        "D": "+++---",
        "N1": "----++",
        "N2": "+++++-",
        "disc": "+-++++",
        "N1/D": "---+--",
        "N2/D": "+++--+",
        "D*disc": "+-+---",
    },
    "r1>0,r2<r1": {
        "cuts": ("rho1", "rho2", "d", "r2", "r1"),
        "D": "+++---",
        "N1": "-----+",
        "N2": "++++--",
        "disc": "+-++++",
        "N1/D": "---++-",
        "N2/D": "+++-++",
        "D*disc": "+-+---",
    },
}

_ROWS = ("D", "N1", "N2", "disc", "N1/D", "N2/D", "D*disc")


def _sgn(v) -> str:
    return "+" if v > 0 else ("-" if v < 0 else "0")


def _rational_inside(lo, hi) -> Fraction:
    """A rational strictly between two reals given as Fraction or Surd."""

    def bracket(v, side):
        if isinstance(v, Fraction):
            return v
        k = 4
        while True:
            s = _sqrt_bounds(v.rad, k)
            vals = sorted((v.alpha + v.beta * s[0], v.alpha + v.beta * s[1]))
            if vals[1] - vals[0] < (hi_approx - lo_approx) / 8:
                return vals[1] if side == "lo" else vals[0]
            k += 4

    lo_approx, hi_approx = Fraction(str(float(to_mpf(lo)))), Fraction(str(float(to_mpf(hi))))
    if hi_approx <= lo_approx:
        hi_approx = lo_approx + Fraction(1, 10**12)
    u, v = bracket(lo, "lo"), bracket(hi, "hi")
    return _inside(u, v)


def sign_table(m: int, x) -> dict:
    """Exact signs of the table rows at a rational sample in each p-interval.

    Returns the case, the ordered cut points, the computed rows and whether the
    last three rows are ever simultaneously positive.
    """
    x = parse_rat(x)
    r1, r2, d = _bounds(m, x)
    rho1, rho2 = _rhos(m, x)
    case = _case(r1, r2)
    named = {"d": d, "r2": r2}
    if r1 is not None and r1 > 0:
        named["r1"] = r1
    rho_real_positive = rho1 is not None and rho1 > 0
    if rho_real_positive:
        named["rho1"], named["rho2"] = rho1, rho2
    order = sorted(named, key=lambda k: to_mpf(named[k]))
    cuts = [Fraction(0)] + [named[k] for k in order]
    samples = [_rational_inside(u, v) for u, v in zip(cuts, cuts[1:])]
    samples.append(cuts[-1] + 1 + abs(cuts[-1]))
    A, B, C = _script(m, x)
    rows = {k: "" for k in _ROWS}
    all_positive = False
    for p in samples:
        N1, N2, D = _N(m, x, p)
        disc = A * p * p + 2 * m * x * B * p + m * m * x * x * C  # D^2 (alpha^2 - 4 beta)
        vals = {"D": D, "N1": N1, "N2": N2, "disc": disc, "N1/D": N1 * D, "N2/D": N2 * D, "D*disc": D * disc}
        for k in _ROWS:
            rows[k] += _sgn(vals[k])
        if N1 * D > 0 and N2 * D > 0 and D * disc > 0:
            all_positive = True
    printed = PRINTED_SIGN_TABLES[case]
    n = len(samples)
    matches = all(printed[k][-n:] == rows[k] for k in _ROWS)
    matches = matches and tuple(order) == printed["cuts"][-len(order):]
    return {
        "m": m,
        "x": x,
        "case": case,
        "cuts": order,
        "samples": samples,
        "rows": rows,
        "rho_real_positive": rho_real_positive,
        "matches_printed": matches,
        "never_all_positive": not all_positive,
    }


# ---------------------------------------------------------------------------
# Hessian of the symplectic potential


def hessian_u(pr: Profile, x1, x2) -> list[list]:
    x1, x2 = parse_rat(x1), parse_rat(x2)
    r = x1 + x2
    pv = pr.p_poly(r)
    if pv == 0:
        raise ConvexityError("p vanishes at this point", r)
    h2 = -1 / r + r / pv
    half = Fraction(1, 2)
    return [[half * (1 / x1 + h2), half * h2], [half * h2, half * (1 / x2 + h2)]]


def hessian_identities(pr: Profile, x1, x2) -> dict:
    """trace of the inverse and the determinant, computed and from the closed forms in q."""
    x1, x2 = parse_rat(x1), parse_rat(x2)
    H = hessian_u(pr, x1, x2)
    det = H[0][0] * H[1][1] - H[0][1] * H[1][0]
    trace_inv = (H[0][0] + H[1][1]) / det
    r = x1 + x2
    q = pr.q_poly(r)
    trace_formula = 4 * x1 * x2 * q / r**3 + 2 * (r * r - q) / r
    det_formula = r * r / (4 * x1 * x2 * (r * r - q))
    return {
        "trace_inv": trace_inv,
        "trace_formula": trace_formula,
        "det": det,
        "det_formula": det_formula,
        "holds": trace_inv == trace_formula and det == det_formula,
    }
