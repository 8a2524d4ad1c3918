"""Exact curvature of the toric metric at rational interior points.

Coordinates are (x1, x2, theta1, theta2); the metric is the block
Hess(u) + Hess(u)^{-1}, so det g = 1 and nothing depends on the angles.
Each field is carried as a truncated Taylor jet in (x1, x2), which makes
Christoffel symbols, Riemann, Ricci and second covariant derivatives exact
rationals.

Conventions:
  R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb}
  Ric_{bd}  = R^a_{bad}
  Delta     = -tr Hess   (non-negative Laplacian)
  orientation: the Kaehler form dx1^dth1 + dx2^dth2 is self-dual,
  i.e. eps_{0123} = -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

import mpmath

from .ansatz import Profile, einstein_constant, profile_from_local, vanishing_locus
from .errors import ParameterError, SingularLocusError, UnsupportedError
from .exactpoly import Poly, RatFunc, parse_rat, rat_str
from .jets import Jet, compose_poly

__all__ = [
    "Point4",
    "CurvatureReport",
    "metric_at",
    "curvature_at",
    "conformal_einstein_residual",
    "laplacian_check",
    "derdzinski_scalar_identity",
    "diagonal_frame_check",
    "beyond_limit",
    "abreu_scalar",
    "self_tests",
]

N = 4
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Point4:
    x1: Fraction
    x2: Fraction

    @classmethod
    def of(cls, x1, x2) -> "Point4":
        return cls(parse_rat(x1), parse_rat(x2))

    @property
    def r(self) -> Fraction:
        return self.x1 + self.x2


def _point(pt) -> Point4:
    if isinstance(pt, Point4):
        return pt
    x1, x2 = pt
    return Point4.of(x1, x2)


def _check_point(pr: Profile, pt: Point4, b=None):
    if not (pt.x1 > 0 and pt.x2 > 0):
        raise ParameterError("interior points need x1 > 0 and x2 > 0")
    if not pt.r > pr.a:
        raise ParameterError(f"x1 + x2 = {pt.r} must exceed a = {pr.a}")
    if b is not None and not pt.r < b:
        raise ParameterError(f"x1 + x2 = {pt.r} must be below b = {b}")
    if pr.p_poly(pt.r) == 0:
        raise SingularLocusError(f"p vanishes at r = {pt.r}")


# ---------------------------------------------------------------------------
# jet linear algebra


def _zero(k):
    return Jet.const(k, 0)


def _inverse(M: list[list[Jet]]) -> list[list[Jet]]:
    """Gauss-Jordan over jets (pivots need a non-zero value)."""
    n = len(M)
    k = M[0][0].k
    A = [list(row) + [Jet.const(k, int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c].value != 0), None)
        if piv is None:
            raise SingularLocusError("metric is degenerate at this point")
        A[c], A[piv] = A[piv], A[c]
        inv = A[c][c].inverse()
        A[c] = [v * inv for v in A[c]]
        for r in range(n):
            if r != c and not A[r][c].is_zero():
                f = A[r][c]
                A[r] = [vr - f * vc for vr, vc in zip(A[r], A[c])]
    return [row[n:] for row in A]


def _block(G, H):
    k = G[0][0].k
    z = _zero(k)
    return [
        [G[0][0], G[0][1], z, z],
        [G[1][0], G[1][1], z, z],
        [z, z, H[0][0], H[0][1]],
        [z, z, H[1][0], H[1][1]],
    ]


def _dd(f: Jet, c: int) -> Jet:
    """Coordinate derivative; the angles are cyclic."""
    if c < 2:
        return f.d(c)
    return _zero(f.k - 1)


# ---------------------------------------------------------------------------
# metric


@dataclass
class MetricJet:
    pt: Point4
    order: int
    G: list  # Hess(u) jets
    Ginv: list  # computed inverse jets
    Ginv_closed: list  # 2 [[x1 - x1^2 f, -x1 x2 f], [., x2 - x2^2 f]], f = q / r^3
    r: Jet
    p: Jet
    q: Jet
    x: tuple  # (x1, x2) jets

    @property
    def g(self):
        return _block(self.G, self.Ginv)

    def values(self) -> list[list[Fraction]]:
        return [[e.value for e in row] for row in self.g]

    def inverse_matches_closed_form(self) -> bool:
        return all((self.Ginv[i][j] - self.Ginv_closed[i][j]).is_zero() for i in range(2) for j in range(2))

    def product_is_identity(self) -> bool:
        for i in range(2):
            for j in range(2):
                e = self.G[i][0] * self.Ginv[0][j] + self.G[i][1] * self.Ginv[1][j]
                if not (e - int(i == j)).is_zero():
                    return False
        return True

    def det_matches(self) -> bool:
        det = self.G[0][0] * self.G[1][1] - self.G[0][1] * self.G[1][0]
        x1, x2 = self.x
        return (det - self.r * self.r / (4 * x1 * x2 * self.p)).is_zero()


def metric_at(pr: Profile, pt, order: int = 3, b=None) -> MetricJet:
    pt = _point(pt)
    _check_point(pr, pt, b)
    x1 = Jet.variable(order, 0, pt.x1)
    x2 = Jet.variable(order, 1, pt.x2)
    r = x1 + x2
    q = compose_poly(pr.q_poly.coeffs, r)
    p = r * r - q
    h2 = -1 / r + r / p
    G = [[HALF * (1 / x1 + h2), HALF * h2], [HALF * h2, HALF * (1 / x2 + h2)]]
    Ginv = _inverse(G)
    f = q / (r * r * r)
    closed = [[2 * (x1 - x1 * x1 * f), -2 * x1 * x2 * f], [-2 * x1 * x2 * f, 2 * (x2 - x2 * x2 * f)]]
    return MetricJet(pt, order, G, Ginv, closed, r, p, q, (x1, x2))


# ---------------------------------------------------------------------------
# curvature pipeline on a general 4x4 jet metric depending on (x1, x2) only


class _Geometry:
    def __init__(self, g: list[list[Jet]]):
        self.g = g
        self.k = g[0][0].k
        if self.k < 2:
            raise ValueError("curvature needs jets of order >= 2")
        self.ginv = _inverse(g)
        k1 = self.k - 1
        dg = [[[_dd(g[a][b], c) for b in range(N)] for a in range(N)] for c in range(N)]
        gi = [[e.truncate(k1) for e in row] for row in self.ginv]
        self.Gam = [[[_zero(k1) for _ in range(N)] for _ in range(N)] for _ in range(N)]
        for b in range(N):
            for c in range(b, N):
                low = [dg[b][d][c] + dg[c][d][b] - dg[d][b][c] for d in range(N)]
                for a in range(N):
                    acc = _zero(k1)
                    for d in range(N):
                        if not low[d].is_zero() and not gi[a][d].is_zero():
                            acc = acc + gi[a][d] * low[d]
                    acc = acc * HALF
                    self.Gam[a][b][c] = acc
                    self.Gam[a][c][b] = acc
        self._riemann()

    def _riemann(self):
        k2 = self.k - 2
        G = self.Gam
        Gt = [[[e.truncate(k2) for e in row] for row in mat] for mat in G]
        dG = [[[[_dd(G[a][b][c], e) for c in range(N)] for b in range(N)] for a in range(N)] for e in range(N)]
        R = [[[[None] * N for _ in range(N)] for _ in range(N)] for _ in range(N)]
        for a in range(N):
            for b in range(N):
                for c in range(N):
                    for d in range(N):
                        if d < c:
                            R[a][b][c][d] = -R[a][b][d][c]
                            continue
                        if d == c:
                            R[a][b][c][d] = _zero(k2)
                            continue
                        acc = dG[c][a][d][b] - dG[d][a][c][b]
                        for e in range(N):
                            u, v = Gt[a][c][e], Gt[e][d][b]
                            if not u.is_zero() and not v.is_zero():
                                acc = acc + u * v
                            u, v = Gt[a][d][e], Gt[e][c][b]
                            if not u.is_zero() and not v.is_zero():
                                acc = acc - u * v
                        R[a][b][c][d] = acc
        self.R = R
        self.Ric = [[sum((R[a][b][a][d] for a in range(N)), _zero(k2)) for d in range(N)] for b in range(N)]
        gi = [[e.truncate(k2) for e in row] for row in self.ginv]
        self.scal = sum((gi[b][d] * self.Ric[b][d] for b in range(N) for d in range(N)), _zero(k2))

    # values at the base point ------------------------------------------
    def gv(self):
        return [[e.value for e in row] for row in self.g]

    def giv(self):
        return [[e.value for e in row] for row in self.ginv]

    def ric(self):
        return [[e.value for e in row] for row in self.Ric]

    def rm(self):
        """Fully covariant Rm_{abcd} = g_{ae} R^e_{bcd}; constant curvature K gives K(g_ac g_bd - g_ad g_bc)."""
        g = self.gv()
        R = self.R
        return [
            [[[sum(g[a][e] * R[e][b][c][d].value for e in range(N)) for d in range(N)] for c in range(N)] for b in range(N)]
            for a in range(N)
        ]

    def hess(self, f: Jet) -> list[list[Fraction]]:
        """Covariant Hessian of a function given as a jet (order >= 2)."""
        df = [_dd(f, c).value for c in range(N)]
        out = [[Fraction(0)] * N for _ in range(N)]
        for a in range(N):
            for b in range(N):
                second = _dd(_dd(f, a), b).value if (a < 2 and b < 2) else Fraction(0)
                out[a][b] = second - sum(self.Gam[c][a][b].value * df[c] for c in range(N))
        return out

    def laplacian(self, f: Jet) -> Fraction:
        H = self.hess(f)
        gi = self.giv()
        return -sum(gi[a][b] * H[a][b] for a in range(N) for b in range(N))

    def grad_norm2(self, f: Jet) -> Fraction:
        df = [_dd(f, c).value for c in range(N)]
        gi = self.giv()
        return sum(gi[a][b] * df[a] * df[b] for a in range(N) for b in range(N))


def _max_abs(mat) -> Fraction:
    return max((abs(v) for row in mat for v in row), default=Fraction(0))


def _tracefree(T, g, gi):
    tr = sum(gi[a][b] * T[a][b] for a in range(N) for b in range(N))
    return [[T[a][b] - tr / 4 * g[a][b] for b in range(N)] for a in range(N)]


# ---------------------------------------------------------------------------
# Weyl and its self-dual part


def _weyl(rm, ric, s, g):
    def kn(h, k, a, b, c, d):
        return h[a][c] * k[b][d] + h[b][d] * k[a][c] - h[a][d] * k[b][c] - h[b][c] * k[a][d]

    W = [[[[Fraction(0)] * N for _ in range(N)] for _ in range(N)] for _ in range(N)]
    for a in range(N):
        for b in range(N):
            for c in range(N):
                for d in range(N):
                    W[a][b][c][d] = rm[a][b][c][d] - HALF * kn(ric, g, a, b, c, d) + s / 12 * kn(g, g, a, b, c, d)
    return W


def _perm_sign(p) -> int:
    s = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


# Kaehler orientation with det g = 1
_EPS = {p: -_perm_sign(p) for p in permutations(range(N))}


def _raise2(alpha, gi):
    return [[sum(gi[a][c] * gi[b][d] * alpha[c][d] for c in range(N) for d in range(N)) for b in range(N)] for a in range(N)]


def _star(alpha, gi):
    up = _raise2(alpha, gi)
    out = [[Fraction(0)] * N for _ in range(N)]
    for (a, b, c, d), e in _EPS.items():
        out[a][b] += HALF * e * up[c][d]
    return out


def _inner2(alpha, beta, gi):
    up = _raise2(beta, gi)
    return HALF * sum(alpha[a][b] * up[a][b] for a in range(N) for b in range(N))


def _apply_w(W, alpha, gi):
    up = _raise2(alpha, gi)
    return [[HALF * sum(W[a][b][c][d] * up[c][d] for c in range(N) for d in range(N)) for b in range(N)] for a in range(N)]


def _elem(i, j):
    e = [[Fraction(0)] * N for _ in range(N)]
    e[i][j], e[j][i] = Fraction(1), Fraction(-1)
    return e


def _solve3(M, rhs):
    # Cramer on a 3x3
    def det3(A):
        return (
            A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
            - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
            + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0])
        )

    D = det3(M)
    out = []
    for col in range(3):
        A = [[rhs[i] if j == col else M[i][j] for j in range(3)] for i in range(3)]
        out.append(det3(A) / D)
    return out


def _w_plus_charpoly(W, gi) -> tuple[Poly, bool]:
    basis = []
    for j in (1, 2, 3):
        e = _elem(0, j)
        se = _star(e, gi)
        basis.append([[e[a][b] + se[a][b] for b in range(N)] for a in range(N)])
    gram = [[_inner2(u, v, gi) for v in basis] for u in basis]
    # matrix of W on the basis: W(alpha_j) = sum_i M[i][j] alpha_i
    M = [[Fraction(0)] * 3 for _ in range(3)]
    for j, al in enumerate(basis):
        wa = _apply_w(W, al, gi)
        rhs = [_inner2(u, wa, gi) for u in basis]
        col = _solve3(gram, rhs)
        for i in range(3):
            M[i][j] = col[i]
    tr = M[0][0] + M[1][1] + M[2][2]
    minors = (
        M[0][0] * M[1][1] - M[0][1] * M[1][0]
        + M[0][0] * M[2][2] - M[0][2] * M[2][0]
        + M[1][1] * M[2][2] - M[1][2] * M[2][1]
    )
    det = (
        M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
        - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
        + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
    )
    omega = [[Fraction(0)] * N for _ in range(N)]
    omega[0][2], omega[2][0], omega[1][3], omega[3][1] = 1, -1, 1, -1
    sd = _star(omega, gi) == [[Fraction(v) for v in row] for row in omega]
    return Poly([-det, minors, -tr, 1]), sd


# ---------------------------------------------------------------------------
# reports


@dataclass
class CurvatureReport:
    pt: Point4
    metric: list
    scal: Fraction
    scal_formula: Fraction
    ricci: list
    weyl_plus_charpoly: Poly
    weyl_plus_expected: Poly
    bach: list
    bach_max_entry: Fraction
    lam: object  # S / 4, None when S is not available
    einstein_residual: object  # Fraction, None when scal = 0
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def pair(v):
            return {"exact": rat_str(v), "approx": mpmath.nstr(mpmath.mpf(v.numerator) / v.denominator, 17)}

        return {
            "point": [rat_str(self.pt.x1), rat_str(self.pt.x2)],
            "metric": [[rat_str(v) for v in row] for row in self.metric],
            "scal": pair(self.scal),
            "scal_formula": rat_str(self.scal_formula),
            "ricci": [[rat_str(v) for v in row] for row in self.ricci],
            "weyl_plus_charpoly": self.weyl_plus_charpoly.to_json(),
            "bach_max_entry": pair(self.bach_max_entry),
            "lambda": None if self.lam is None else rat_str(self.lam),
            "einstein_residual": None if self.einstein_residual is None else pair(self.einstein_residual),
            "checks": self.checks,
        }


def _scal_jet(pr: Profile, r: Jet) -> Jet:
    return 2 * pr.q3 + pr.q4 * r


def _ricci_riemann_checks(geo: _Geometry) -> dict:
    rm = geo.rm()
    g, gi, ric = geo.gv(), geo.giv(), geo.ric()
    idx = range(N)
    sym = all(
        rm[a][b][c][d] == -rm[b][a][c][d] == -rm[a][b][d][c] == rm[c][d][a][b]
        for a in idx for b in idx for c in idx for d in idx
    )
    bianchi = all(rm[a][b][c][d] + rm[a][c][d][b] + rm[a][d][b][c] == 0 for a in idx for b in idx for c in idx for d in idx)
    ric_trace = all(
        ric[b][d] == sum(gi[a][c] * rm[a][b][c][d] for a in idx for c in idx) for b in idx for d in idx
    )
    ric_sym = all(ric[a][b] == ric[b][a] for a in idx for b in idx)
    # J maps d/dx_i to (Hess u)^{-1}-weighted d/dtheta; J-invariance shows up as the block pattern
    j_block = all(ric[a][b] == 0 for a in (0, 1) for b in (2, 3))
    return {"riemann_symmetries": sym, "first_bianchi": bianchi, "ricci_is_trace": ric_trace,
            "ricci_symmetric": ric_sym, "ricci_block": j_block}


def _einstein_residual_of(g: list[list[Jet]], S) -> tuple[Fraction, Fraction]:
    geo = _Geometry(g)
    ric, gv = geo.ric(), geo.gv()
    res = _max_abs([[ric[a][b] - S / 4 * gv[a][b] for b in range(N)] for a in range(N)])
    return res, geo.scal.value


def curvature_at(pr: Profile, pt, b=None, with_conformal: bool = True) -> CurvatureReport:
    pt = _point(pt)
    mj = metric_at(pr, pt, order=2, b=b)
    g = mj.g
    geo = _Geometry(g)
    gv, gi, ric = geo.gv(), geo.giv(), geo.ric()
    s = geo.scal.value
    s_formula = 2 * pr.q3 + pr.q4 * pt.r
    W = _weyl(geo.rm(), ric, s, gv)
    cp, sd = _w_plus_charpoly(W, gi)
    expected = Poly([-s / 6, 1]) * Poly([s / 12, 1]) ** 2
    sj = _scal_jet(pr, mj.r)
    hs = geo.hess(sj)
    ric0 = _tracefree(ric, gv, gi)
    hs0 = _tracefree(hs, gv, gi)
    bach = [[(s_formula * ric0[a][b] + 2 * hs0[a][b]) / 12 for b in range(N)] for a in range(N)]
    lam = None
    residual = None
    try:
        S = einstein_constant(pr).value
        lam = S / 4
    except Exception:  # noqa: BLE001 - a missing constant only drops the optional fields
        S = None
    if with_conformal and S is not None and s_formula != 0:
        gt = [[e / (sj * sj) for e in row] for row in g]
        residual, _ = _einstein_residual_of(gt, S)
    checks = _ricci_riemann_checks(geo)
    checks.update(
        {
            "inverse_closed_form": mj.inverse_matches_closed_form(),
            "hess_times_inverse": mj.product_is_identity(),
            "det_formula": mj.det_matches(),
            "scal_formula": s == s_formula,
            "kaehler_form_self_dual": sd,
            "weyl_plus_spectrum": cp == expected,
        }
    )
    return CurvatureReport(pt, gv, s, s_formula, ric, cp, expected, bach, _max_abs(bach), lam, residual, checks)


def abreu_scalar(pr: Profile, pt) -> Fraction:
    """-(sum_ij d_i d_j u^{ij}) from the closed-form inverse."""
    mj = metric_at(pr, pt, order=2)
    H = mj.Ginv_closed
    return -(H[0][0].derivative(2, 0) + 2 * H[0][1].derivative(1, 1) + H[1][1].derivative(0, 2))


def self_tests(pr: Profile, pt) -> dict:
    """Order-3 jets: contracted Bianchi div Ric = ds / 2 and the order-2 Riemann checks."""
    mj = metric_at(pr, pt, order=3)
    geo = _Geometry(mj.g)
    gi = [[e.value for e in row] for row in geo.ginv]
    Gam = [[[e.value for e in row] for row in mat] for mat in geo.Gam]
    Ric = geo.Ric
    ric = geo.ric()
    ds = [_dd(geo.scal, c).value for c in range(N)]
    ok = True
    for b in range(N):
        div = Fraction(0)
        for a in range(N):
            for c in range(N):
                if gi[c][a] == 0:
                    continue
                nab = _dd(Ric[a][b], c).value - sum(Gam[e][c][a] * ric[e][b] + Gam[e][c][b] * ric[a][e] for e in range(N))
                div += gi[c][a] * nab
        ok = ok and div == ds[b] / 2
    out = _ricci_riemann_checks(geo)
    out["contracted_bianchi"] = ok
    out["scal_formula"] = geo.scal.value == 2 * pr.q3 + pr.q4 * _point(pt).r
    return out


# ---------------------------------------------------------------------------
# conformal Einstein metric, Laplacian, scalar identity


@dataclass(frozen=True)
class ConformalEinsteinReport:
    max_residual: Fraction
    S: Fraction
    lam: Fraction
    scal_tilde: tuple  # scal of s^-2 g at each point
    residuals: tuple

    def to_json(self) -> dict:
        return {
            "max_residual": rat_str(self.max_residual),
            "S": rat_str(self.S),
            "lambda": rat_str(self.lam),
            "scal_tilde": [rat_str(v) for v in self.scal_tilde],
            "residuals": [rat_str(v) for v in self.residuals],
        }


def conformal_einstein_residual(pr: Profile, pts, b=None) -> ConformalEinsteinReport:
    S = einstein_constant(pr).value
    residuals, scals = [], []
    for pt in pts:
        pt = _point(pt)
        s = 2 * pr.q3 + pr.q4 * pt.r
        if s == 0:
            loc = vanishing_locus(pr)
            raise SingularLocusError(f"scalar curvature vanishes at r = {pt.r} ({loc.kind} locus)")
        mj = metric_at(pr, pt, order=2, b=b)
        sj = _scal_jet(pr, mj.r)
        gt = [[e / (sj * sj) for e in row] for row in mj.g]
        res, st = _einstein_residual_of(gt, S)
        residuals.append(res)
        scals.append(st)
    return ConformalEinsteinReport(max(residuals), S, S / 4, tuple(scals), tuple(residuals))


def _gamma_jet(gamma, r: Jet) -> Jet:
    if isinstance(gamma, Poly):
        return compose_poly(gamma.coeffs, r)
    if isinstance(gamma, RatFunc):
        return compose_poly(gamma.num.coeffs, r) / compose_poly(gamma.den.coeffs, r)
    return gamma(r)


def laplacian_check(pr: Profile, gamma, pt) -> dict:
    """Jet Laplacian of gamma(r) against -2[(2 - q'/r) gamma' + (r - q/r) gamma'']."""
    pt = _point(pt)
    mj = metric_at(pr, pt, order=2)
    geo = _Geometry(mj.g)
    lap = geo.laplacian(_gamma_jet(gamma, mj.r))
    t = Jet.variable(2, 0, pt.r)
    gt = _gamma_jet(gamma, t)
    g1, g2 = gt.derivative(1, 0), gt.derivative(2, 0)
    r = pt.r
    q = pr.q_poly
    formula = -2 * ((2 - q.derivative()(r) / r) * g1 + (r - q(r) / r) * g2)
    return {"jet": lap, "formula": formula, "residual": lap - formula}


@dataclass(frozen=True)
class ScalarIdentityReport:
    values: tuple
    constant: bool
    S: object
    matches_S: bool

    def to_json(self) -> dict:
        return {
            "values": [rat_str(v) for v in self.values],
            "constant": self.constant,
            "S": None if self.S is None else rat_str(self.S),
            "matches_S": self.matches_S,
        }


def derdzinski_scalar_identity(pr: Profile, pts) -> ScalarIdentityReport:
    """s^3 - 6 s Delta s - 12 |ds|^2 at each point; constant and equal to S for Bach-flat profiles."""
    vals = []
    for pt in pts:
        pt = _point(pt)
        mj = metric_at(pr, pt, order=2)
        geo = _Geometry(mj.g)
        sj = _scal_jet(pr, mj.r)
        s = sj.value
        vals.append(s**3 - 6 * s * geo.laplacian(sj) - 12 * geo.grad_norm2(sj))
    try:
        S = einstein_constant(pr).value
    except Exception:  # noqa: BLE001
        S = None
    constant = all(v == vals[0] for v in vals)
    return ScalarIdentityReport(tuple(vals), constant, S, constant and S is not None and vals[0] == S)


# ---------------------------------------------------------------------------
# diagonal frame


def diagonal_frame_check(pr: Profile, pt) -> dict:
    """Coefficients of g in the coframe dr, kappa, eta, chi, and which radial candidate matches."""
    pt = _point(pt)
    _check_point(pr, pt)
    x1, x2, r = pt.x1, pt.x2, pt.r
    mj = metric_at(pr, pt, order=0)
    G = [[e.value for e in row] for row in mj.G]
    H = [[e.value for e in row] for row in mj.Ginv]
    pv = pr.p_poly(r)

    def congruence(T, M):
        # coefficients C with M = T^t C T, i.e. C = T^-t M T^-1
        det = T[0][0] * T[1][1] - T[0][1] * T[1][0]
        Ti = [[T[1][1] / det, -T[0][1] / det], [-T[1][0] / det, T[0][0] / det]]
        TiT = [[Ti[0][0], Ti[1][0]], [Ti[0][1], Ti[1][1]]]
        tmp = [[sum(TiT[i][k] * M[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
        return [[sum(tmp[i][k] * Ti[k][j] for k in range(2)) for j in range(2)] for i in range(2)]

    Cx = congruence([[Fraction(1), Fraction(1)], [-x2, x1]], G)  # (dr, kappa)
    Ct = congruence([[x1 / r, x2 / r], [1 / r, -1 / r]], H)  # (eta, chi)
    c = Cx[0][0]
    candidates = {"2r/p": 2 * r / pv, "2/(rp)": 2 / (r * pv), "r/(2p)": r / (2 * pv)}
    return {
        "dr2": c,
        "kappa2": Cx[1][1],
        "eta2": Ct[0][0],
        "chi2": Ct[1][1],
        "orthogonal": Cx[0][1] == 0 and Ct[0][1] == 0,
        "matches": {k: v == c for k, v in candidates.items()},
        "kappa_matches": Cx[1][1] == 1 / (2 * r * x1 * x2),
        "eta_matches_p_over_r": Ct[0][0] == pv / r,
        "eta_matches_2p_over_r": Ct[0][0] == 2 * pv / r,
        "chi_matches": Ct[1][1] == 2 * r * x1 * x2,
    }


# ---------------------------------------------------------------------------
# rescaled limit of the scalar-flat family


@dataclass(frozen=True)
class BeyondLimitReport:
    m: int
    a: Fraction
    S_expected: object
    scal: tuple
    residuals: tuple
    rescaled: bool
    divergence_r: object

    @property
    def max_residual(self):
        return max(self.residuals)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "a": rat_str(self.a),
            "S_expected": None if self.S_expected is None else rat_str(self.S_expected),
            "scal": [rat_str(v) for v in self.scal],
            "residuals": [rat_str(v) for v in self.residuals],
            "max_residual": rat_str(self.max_residual),
            "rescaled": self.rescaled,
            "divergence_r": None if self.divergence_r is None else rat_str(self.divergence_r),
        }


def beyond_limit(m: int, a, pts) -> BeyondLimitReport:
    """phi^2 g for the scalar-flat profile with 1/phi = (8(m-1) - 4(m-2) r/a) / (4m)."""
    a = parse_rat(a)
    pr = profile_from_local(m, a, 0)
    rescaled = m != 2
    if m == 1:
        S = 12 / a
    elif m >= 3:
        S = -12 * (m - 2) / a
    else:
        S = None
    div_r = a * Fraction(2 * (m - 1), m - 2) if m >= 3 else None
    scals, residuals = [], []
    for pt in pts:
        pt = _point(pt)
        mj = metric_at(pr, pt, order=2)
        if rescaled:
            inv_phi = (8 * (m - 1) - 4 * (m - 2) * mj.r / a) / (4 * m)
            if inv_phi.value == 0:
                raise SingularLocusError(f"conformal factor diverges at r = {pt.r}")
            g = [[e / (inv_phi * inv_phi) for e in row] for row in mj.g]
        else:
            g = mj.g
        geo = _Geometry(g)
        scals.append(geo.scal.value)
        if S is None:
            residuals.append(_max_abs(geo.ric()))
        else:
            ric, gv = geo.ric(), geo.gv()
            residuals.append(_max_abs([[ric[i][j] - S / 4 * gv[i][j] for j in range(N)] for i in range(N)]))
    if m == 2 and not pts:
        raise UnsupportedError("no points given")
    return BeyondLimitReport(m, a, S, tuple(scals), tuple(residuals), rescaled, div_r)
