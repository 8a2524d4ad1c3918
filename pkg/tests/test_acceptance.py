"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Two parts are known to be unattainable as stated and run as strict xfails so the
honest FAIL line is still printed: the m = 3 strict root ordering (two of the
cut points coincide) and the Kahler-Einstein rate 2 at a = 1 (the true rate is
2 sqrt(2/(3a)), which equals 2 only at a = 2/3).
"""

import random
from fractions import Fraction as F

import mpmath
import pytest

from calabi.ansatz import (
    einstein_constant,
    is_bach_flat,
    profile_from_cone,
    profile_from_local,
    scalar_curvature,
)
from calabi.classifier import atlas_boundaries, atlas_region, classify, hitchin_thorpe
from calabi.conesolver import (
    admissibility,
    cone_quadratic,
    discriminant_bracket,
    limit_profiles,
    m1_weights,
    m1_x0,
    weight_asymptotics,
)
from calabi.convexity import certify_positive
from calabi.curvlab import (
    abreu_scalar,
    beyond_limit,
    conformal_einstein_residual,
    curvature_at,
    derdzinski_scalar_identity,
    laplacian_check,
)
from calabi.errors import NoSolutionError
from calabi.exactpoly import IsolatedRoot, Poly, real_roots_above
from calabi.geoprobe import growth_exponent
from calabi.identities import run_suite
from calabi.surd import to_mpf

T = Poly.x()
ORDER = ["y1", "-12m", "-6(m-2)", "y2", "-4(m-2)", "y3", "0"]
KIND_OF = {
    "incomplete": "IncompleteEnd",
    "cone-angle": "ConeAngleCompactification",
    "scalar-flat": "CompleteQuarticGrowth",
    "kahler-einstein": "CompleteExponentialGrowth",
}


def _interior_points(pr, n, rng, scal_nonzero=True):
    """Rational (x1, x2) with r = x1 + x2 strictly inside the region where p > 0 (and scal != 0)."""
    roots = real_roots_above(pr.p_poly, pr.a)
    hi = roots[0].refine(F(1, 10**6)).lo if roots else pr.a + 4
    sc = scalar_curvature(pr)
    out = []
    for _ in range(100 * n):
        if len(out) == n:
            break
        r = pr.a + (hi - pr.a) * F(rng.randint(1, 999), 1000)
        if pr.p_poly(r) <= 0 or (scal_nonzero and sc(r) == 0):
            continue
        u = F(rng.randint(1, 99), 100)
        out.append((r * u, r * (1 - u)))
    assert len(out) == n, "no interior region found"
    return out


def _lo(v):
    return v.refine(F(1, 10**12)).lo if isinstance(v, IsolatedRoot) else v


def _hi(v):
    return v.refine(F(1, 10**12)).hi if isinstance(v, IsolatedRoot) else v


def _strictly_ordered(m):
    b = atlas_boundaries(m)
    return all(_hi(b[u]) < _lo(b[v]) for u, v in zip(ORDER, ORDER[1:]))


# ---------------------------------------------------------------- 1


def test_criterion_1_bach_flat_exact(criterion):
    rng = random.Random(1)
    bad = []
    for _ in range(100):
        m = rng.randint(1, 8)
        a = F(rng.randint(1, 1000), 100)
        s = F(rng.randint(-2000, 2000), 100)
        pr = profile_from_local(m, a, s)
        if pr.q3 * pr.q1 != pr.q4 * pr.q0:
            bad.append((m, a, s))
    assert criterion(1, not bad, f"q3 q1 = q4 q0 exactly on 100 random profiles, {len(bad)} failures")


# ---------------------------------------------------------------- 2


def test_criterion_2_taub_bolt_chain(criterion):
    pr = profile_from_local(1, 1, 6)
    checks = {}
    checks["q"] = (pr.q0, pr.q1, pr.q3, pr.q4) == (F(9, 8), F(-3, 4), F(9, 2), F(-3))
    checks["scal"] = scalar_curvature(pr).poly == Poly([9, -3])
    ec = einstein_constant(pr)
    checks["S"] = ec.coefficient_form == 0 and ec.y_form == 0
    cl = classify(pr)
    checks["classify"] = cl.kind == "CompleteFiniteVolume" and cl.b.exact == 3 and cl.multiplicity == 2
    pts = _interior_points(pr, 10, random.Random(2))
    checks["conformal"] = conformal_einstein_residual(pr, pts).max_residual == 0
    g = growth_exponent(pr, conformal=True)
    checks["growth"] = g.model == "polynomial" and abs(g.value - 3) < 0.1
    failed = [k for k, v in checks.items() if not v]
    assert criterion(2, not failed, f"Taub-bolt chain, conformal growth {float(g.value):.4f}, failed {failed}")


# ---------------------------------------------------------------- 3


def test_criterion_3_cone_anchor_values(criterion):
    (w,) = cone_quadratic(1, 3).weights
    adm = admissibility(1, 3, w)
    anchors = w == F(12, 11) and adm.r1 == F(6, 11) and adm.d == F(15, 11)
    roots = real_roots_above(discriminant_bracket(1), 1)
    x0 = m1_x0().refine(F(1, 10**20))
    in_range = len(roots) == 1 and discriminant_bracket(1) == T**4 + 4 * T**3 - 14 * T**2 - 12 * T + 9
    in_range = in_range and F(260, 100) < x0.lo and x0.hi < F(262, 100)
    double = m1_weights(x0.hi)
    gap = abs(to_mpf(double["p_plus"]) - to_mpf(double["p_minus"]))
    near = abs(to_mpf(double["p_plus"]) - mpmath.mpf("2.062")) < 1e-2 and gap < 1e-6
    ok = anchors and in_range and near
    detail = f"weight {w}, r1 {adm.r1}, d {adm.d}, x0 ~ {float(x0.hi):.6f}, double weight ~ {float(to_mpf(double['p_plus'])):.4f}"
    assert criterion(3, ok, detail)


# ---------------------------------------------------------------- 4


def test_criterion_4_m2_nonexistence(criterion):
    br = discriminant_bracket(2)
    proof = br == Poly([16, -32, -32]) and real_roots_above(br, 1) == [] and br(2) < 0
    xs = [1 + F(99 * k, 20) + F(1, 7 * k) for k in range(1, 21)]
    xs = [min(x, F(100)) for x in xs]
    zero = all(len(cone_quadratic(2, x).weights) == 0 for x in xs)
    ok = proof and zero and len(set(xs)) == 20 and all(1 < x <= 100 for x in xs)
    assert criterion(4, ok, "bracket -32x^2-32x+16 rootless on (1, inf), negative at 2, zero weights at 20 x")


# ---------------------------------------------------------------- 5


def test_criterion_5_exact_curvature_identities(criterion):
    rng = random.Random(5)
    flat = [profile_from_local(m, a, s) for m, a, s in
            [(1, 1, 6), (1, 1, 4), (2, 1, 0), (3, 1, 5), (3, 2, -2), (4, 1, 1), (5, F(1, 2), 3), (6, 3, F(-1, 3))]]
    tampered = [flat[1].with_q(q0=flat[1].q0 - 1), flat[5].with_q(q0=flat[5].q0 - F(1, 2))]  # p only grows
    profiles = flat + tampered
    counts = [3, 3, 3, 3, 3, 2, 2, 2, 2, 2]
    gamma = Poly([1, -2, F(1, 3), 5])
    failures = []
    n = 0
    for pr, k in zip(profiles, counts):
        bf = is_bach_flat(pr)
        pts = _interior_points(pr, k, rng, scal_nonzero=False)
        for pt in pts:
            n += 1
            rep = curvature_at(pr, pt, with_conformal=False)
            r = pt[0] + pt[1]
            if abreu_scalar(pr, pt) != 2 * pr.q3 + pr.q4 * r:
                failures.append(("abreu", pr, pt))
            if rep.scal != 0 and rep.weyl_plus_charpoly != rep.weyl_plus_expected:
                failures.append(("weyl+", pr, pt))
            if (rep.bach_max_entry == 0) != bf:
                failures.append(("bach", pr, pt))
            if laplacian_check(pr, gamma, pt)["residual"] != 0:
                failures.append(("laplacian", pr, pt))
        if bf:
            ident = derdzinski_scalar_identity(pr, pts)
            if not (ident.constant and ident.matches_S):
                failures.append(("scalar identity", pr, None))
    ok = not failures and n == 25
    assert criterion(5, ok, f"{n} points over {len(profiles)} profiles, {len(failures)} failures")


# ---------------------------------------------------------------- 6


def _region_samples(m, k=50):
    """k rational y strictly inside each open atlas region, plus the rational cut points."""
    b = atlas_boundaries(m)
    cuts = [b[name] for name in ORDER]
    edges = [(None, cuts[0])] + list(zip(cuts, cuts[1:])) + [(cuts[-1], None)]
    out = []
    for lo, hi in edges:
        lo_v = _lo(hi) - 50 if lo is None else _hi(lo)
        hi_v = _hi(lo) + 50 if hi is None else _lo(hi)
        if lo_v >= hi_v:
            continue  # empty region
        out.extend(lo_v + (hi_v - lo_v) * F(j, k + 1) for j in range(1, k + 1))
    out.extend(c for c in cuts if not isinstance(c, IsolatedRoot))
    return out


def test_criterion_6_atlas_grid(criterion):
    mismatches, total = [], 0
    for m in range(3, 7):
        for y in _region_samples(m):
            total += 1
            expect = KIND_OF[atlas_region(m, y).metric_type]
            got = classify(profile_from_local(m, 1, y)).kind
            if got != expect:
                mismatches.append((m, y, expect, got))
    ordered = all(_strictly_ordered(m) for m in (4, 5, 6))
    ok = not mismatches and ordered
    detail = f"{total} (m, y) samples for m = 3..6 match the atlas, strict ordering for m = 4..6: {ordered}"
    assert criterion(6, ok, detail)


@pytest.mark.xfail(strict=True, reason="at m = 3 the cubic root y2 equals -4(m-2) = -4")
def test_criterion_6_strict_ordering_m3(criterion):
    b = atlas_boundaries(3)
    y2 = b["y2"].exact if isinstance(b["y2"], IsolatedRoot) else b["y2"]
    ok = _strictly_ordered(3)
    assert criterion(6, ok, f"strict ordering at m = 3 fails: y2 = {y2} coincides with -4(m-2)")


# ---------------------------------------------------------------- 7


def test_criterion_7_cone_limit_families(criterion):
    m = 3
    lp = limit_profiles(m)
    plus_ok = lp["plus"] == (T - 1) * (T + m - 1)
    minus_ok = lp["minus"] == (T - 1) * ((m - 2) * T**2 + (m + 1) * T + (m + 1)) / 3
    rep = weight_asymptotics(m, (100, 1000))
    limits_ok = True
    for x in (100, 1000):
        cq = cone_quadratic(m, x)
        limits_ok = limits_ok and abs(to_mpf(cq.p_plus) - mpmath.mpf(m) / 2) < 20 / x
        limits_ok = limits_ok and abs(to_mpf(cq.p_minus) * x * (m - 2) / (3 * m) - 1) < 20 / x
    ok = plus_ok and minus_ok and rep.verified and limits_ok
    detail = f"limit profiles exact, remainder constants C+ ~ {rep.C_plus:.3g}, C- ~ {rep.C_minus:.3g}"
    assert criterion(7, ok, detail)


# ---------------------------------------------------------------- 8


def test_criterion_8_convexity_certification(criterion):
    xs = [F(11, 10) + F(k * k, 4) for k in range(20)]
    n, failed = 0, []
    for m in (1, 3, 4, 5):
        for x in xs:
            try:
                weights = cone_quadratic(m, x).weights
            except NoSolutionError:
                continue  # m = 1 below x0 has no weight
            for w in weights:
                n += 1
                if not certify_positive(profile_from_cone(m, 1, x, w)).positive:
                    failed.append((m, x, w))
    suite = [(e.name, rep.holds == e.expect) for e, rep in run_suite("appendixA", ms=range(1, 9))]
    suite_ok = all(v for _, v in suite)
    ok = not failed and n > 0 and suite_ok
    assert criterion(8, ok, f"{n} cone profiles certified positive, {len(suite)} identity checks for m = 1..8")


# ---------------------------------------------------------------- 9


def test_criterion_9_polynomial_growth(criterion):
    quartic = growth_exponent(profile_from_local(2, 1, 0))
    tb = growth_exponent(profile_from_local(1, 1, 6), conformal=True)
    ok = quartic.model == tb.model == "polynomial" and abs(quartic.value - 4) < 0.1 and abs(tb.value - 3) < 0.1
    detail = f"scalar-flat m = 2 exponent {float(quartic.value):.4f}, Taub-bolt conformal {float(tb.value):.4f}"
    assert criterion(9, ok, detail)


@pytest.mark.xfail(strict=True, reason="the rate is 2 sqrt(2/(3a)); at a = 1 that is about 1.633")
def test_criterion_9_kahler_einstein_rate_a1(criterion):
    est = growth_exponent(profile_from_local(3, 1, -4))
    ok = est.model == "exponential" and abs(est.value - 2) < 0.1
    assert criterion(9, ok, f"Kahler-Einstein m = 3, a = 1 exponential rate {float(est.value):.4f}, target 2 +- 0.1")


# ---------------------------------------------------------------- 10


def test_criterion_10_beyond_limit(criterion):
    pts = [(F(3, 4), F(3, 4)), (F(1), F(1, 2)), (F(2, 3), F(1, 2))]  # r / a in (1, 2)
    rep1 = beyond_limit(1, 1, pts)
    ok = rep1.S_expected == 12 and rep1.max_residual == 0 and all(s == 12 for s in rep1.scal)
    for m in (3, 4, 5):
        for a in (F(1), F(3, 2)):
            rep = beyond_limit(m, a, [(x1 * a, x2 * a) for x1, x2 in pts])
            ok = ok and rep.S_expected == -12 * (m - 2) / a and rep.max_residual == 0
            ok = ok and all(s == rep.S_expected for s in rep.scal)
            ok = ok and rep.divergence_r / a == F(2 * (m - 1), m - 2)
    assert criterion(10, ok, "S = 12 at m = 1; S = -12(m-2)/a for m = 3..5, residual 0, singular radius exact")


# ---------------------------------------------------------------- 11


def test_criterion_11_hitchin_thorpe(criterion):
    inside = all(hitchin_thorpe(F(k, 20)) for k in range(1, 101))
    outside = not any(hitchin_thorpe(5 + F(k, 10)) for k in range(1, 51))
    betas = []
    for x in [F(3)] + [F(27, 10) + F(k, 3) for k in range(30)]:
        try:
            for w in cone_quadratic(1, x).weights:
                betas.append(1 / to_mpf(w))
        except NoSolutionError:
            continue
    angles_ok = bool(betas) and all(0 < b < 2 for b in betas)
    ok = inside and outside and angles_ok
    assert criterion(11, ok, f"true on (0, 5], false above 5, {len(betas)} solver angles with beta in (0, 2)")
