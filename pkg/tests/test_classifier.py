from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from calabi.ansatz import Profile, profile_from_cone, profile_from_local
from calabi.classifier import atlas_boundaries, atlas_cubic, atlas_region, classify, hitchin_thorpe
from calabi.conesolver import cone_quadratic
from calabi.errors import ConvexityError, DegenerateProfileError, UnsupportedError
from calabi.exactpoly import IsolatedRoot, Poly
from calabi.surd import Surd


@pytest.mark.parametrize("m", [1, 2, 3, 6])
def test_scalar_flat_is_quartic_growth(m):
    assert classify(profile_from_local(m, 1, 0)).kind == "CompleteQuarticGrowth"


def test_cone_angle_two_pi_root3_minus_one():
    cl = classify(profile_from_local(1, 1, 4))
    assert cl.kind == "ConeAngleCompactification"
    assert cl.b.exact == Surd(1, 1, 3)
    assert cl.weight == Surd(F(1, 2), F(1, 2), 3)
    assert cl.angle_over_2pi == Surd(-1, 1, 3)


def test_taub_bolt_finite_volume():
    cl = classify(profile_from_local(1, 1, 6))
    assert cl.kind == "CompleteFiniteVolume"
    assert cl.b.exact == 3 and cl.multiplicity == 2


def test_kahler_einstein_exponential():
    assert classify(profile_from_local(3, 1, -4)).kind == "CompleteExponentialGrowth"


def test_quartic_without_root_is_incomplete():
    assert classify(profile_from_local(3, 1, 5)).kind == "IncompleteEnd"


def test_convexity_failure_carries_point():
    pr = profile_from_local(1, 1, 6)
    bad = pr.with_q(q0=pr.q0 + 10)
    with pytest.raises(ConvexityError) as exc:
        classify(bad)
    assert exc.value.point is not None


class _FlatP(Profile):
    """A profile whose p is forced to zero; the ansatz never produces one."""

    @property
    def p_poly(self):
        return Poly([])


def test_degenerate_profile():
    with pytest.raises(DegenerateProfileError):
        classify(_FlatP(1, F(1), F(0), F(0), F(0), F(0)))


@given(st.integers(1, 6), st.fractions(min_value=F(1, 10), max_value=5, max_denominator=10))
def test_cone_weight_matches_end_condition(m, x_off):
    x = 1 + x_off
    cq = cone_quadratic(m, x)
    for w in cq.weights:
        cp = profile_from_cone(m, 1, x, w)
        try:
            cl = classify(cp.base)
        except ConvexityError:
            continue  # p may turn negative before b; certified elsewhere
        if cl.kind == "ConeAngleCompactification" and cl.b.exact == cp.b:
            assert cl.weight == w


# ---------------------------------------------------------------- atlas


def test_atlas_m3_boundaries():
    b = atlas_boundaries(3)
    assert b["y1"].exact == Surd(-19, -3, 33)
    assert b["y3"].exact == Surd(-19, 3, 33)
    assert b["y2"].exact == -4  # v(-4) = 0 when m = 3
    assert atlas_cubic(3)(-4) == 0


@pytest.mark.parametrize("m", [4, 5, 6, 9])
def test_atlas_strict_ordering_m_ge_4(m):
    b = atlas_boundaries(m)
    order = ["y1", "-12m", "-6(m-2)", "y2", "-4(m-2)", "y3", "0"]
    for lo, hi in zip(order, order[1:]):
        u, v = b[lo], b[hi]
        uh = u.refine(F(1, 10**9)).hi if isinstance(u, IsolatedRoot) else u
        vl = v.refine(F(1, 10**9)).lo if isinstance(v, IsolatedRoot) else v
        assert uh < vl, (lo, hi)


def test_atlas_examples():
    r = atlas_region(3, 0)
    assert (r.metric_type, r.space) == ("scalar-flat", "O(-3)")
    assert atlas_region(3, -4).metric_type == "kahler-einstein"
    r = atlas_region(4, -1)  # y3 is about -0.467 for m = 4
    assert r.label == "(-4(m-2),y3)" and r.space == "H_4" and r.metric_type == "cone-angle"
    # S = -2 y^2 (y + 6(m-2)) is negative on (-6(m-2), 0)
    assert r.einstein_scalar_sign == "negative"
    assert atlas_region(4, F(-1, 5)).label == "(y3,0)"
    assert atlas_region(4, -30).einstein_scalar_sign == "positive"
    assert atlas_region(4, 3).einstein_scalar_sign == "negative"
    assert atlas_region(4, -12).einstein_scalar_sign == "zero"


def test_atlas_needs_m3():
    with pytest.raises(UnsupportedError):
        atlas_region(2, 0)


# ---------------------------------------------------------------- Hitchin-Thorpe


@pytest.mark.parametrize("beta,ok", [(1, True), (5, True), ("5.01", False), (2, True), ("0.1", True), (9, False)])
def test_hitchin_thorpe(beta, ok):
    assert hitchin_thorpe(beta) is ok


@given(st.fractions(min_value=F(1, 1000), max_value=12, max_denominator=1000))
def test_hitchin_thorpe_threshold(beta):
    assert hitchin_thorpe(beta) == (beta <= 5)
