from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from calabi.ansatz import (
    Profile,
    bach_defect,
    cone_limit_profile,
    cone_printed_coefficients,
    einstein_constant,
    is_bach_flat,
    profile_from_cone,
    profile_from_local,
    scalar_curvature,
    vanishing_locus,
)
from calabi.errors import DegeneratePolytopeError, ParameterError
from calabi.exactpoly import Poly

T = Poly.x()

ms = st.integers(1, 8)
pos = st.fractions(min_value=F(1, 20), max_value=10, max_denominator=30).filter(lambda v: v > 0)
svals = st.fractions(min_value=-20, max_value=20, max_denominator=30)


def test_taub_bolt_coefficients():
    pr = profile_from_local(1, 1, 6)
    assert (pr.q0, pr.q1, pr.q3, pr.q4) == (F(9, 8), F(-3, 4), F(9, 2), -3)
    assert pr.p_tilde() == F(1, 8) * (T + 1) * (T - 1) * (T - 3) ** 2


@pytest.mark.parametrize("m", [1, 2, 3, 5])
@pytest.mark.parametrize("a", [F(1), F(5, 2)])
def test_scalar_flat_profile(m, a):
    pr = profile_from_local(m, a, 0)
    assert (pr.q0, pr.q1, pr.q3, pr.q4) == (a * a * (m - 1), -a * (m - 2), 0, 0)
    quo, rem = divmod(pr.p_tilde(), T - 1)
    assert rem.is_zero() and quo == T + m - 1


def test_kahler_einstein_row():
    pr = profile_from_local(3, 1, -4)
    assert (pr.q3, pr.q4) == (-2, 0)
    assert scalar_curvature(pr).poly == Poly([-4])
    assert pr.p_tilde() == (T - 1) * (T + 2) ** 2 / 3


@given(ms, pos, svals)
def test_local_profiles_are_smooth_and_bach_flat(m, a, s):
    pr = profile_from_local(m, a, s)
    assert bach_defect(pr) == 0
    assert pr.smoothness_residuals() == (0, 0)
    assert pr.s_a == s


@given(ms, pos, svals)
def test_scal_y_form_agrees(m, a, s):
    pr = profile_from_local(m, a, s)
    sc = scalar_curvature(pr)
    for r in (a, 2 * a, a + F(1, 3)):
        assert sc(r) == sc.y_form(r)


@given(ms, pos, svals)
def test_json_round_trip(m, a, s):
    pr = profile_from_local(m, a, s)
    assert Profile.from_json(pr.to_json()) == pr


@pytest.mark.parametrize("bad", [(0, 1, 1), (1, 0, 1), (1, -2, 1)])
def test_parameter_errors(bad):
    with pytest.raises(ParameterError):
        profile_from_local(*bad)


def test_bach_flat_predicate():
    assert is_bach_flat(profile_from_local(1, 1, 6))
    assert not is_bach_flat(Profile(1, F(1), F(2), F(1), F(1), F(1)))


# ---------------------------------------------------------------- cone family


def test_cone_profile_at_taub_bolt_weight():
    cp = profile_from_cone(1, 1, 3, F(12, 11))
    assert is_bach_flat(cp.base)
    assert cp.base.smoothness_residuals() == (0, 0)
    assert cp.end_residuals() == (0, 0)


def test_cone_limit_is_taub_bolt():
    assert cone_limit_profile(1, 1, 3) == profile_from_local(1, 1, 6)


def test_non_solution_weight_not_bach_flat():
    cp = profile_from_cone(1, 1, 2, 1)
    assert cp.base.smoothness_residuals() == (0, 0)
    assert not is_bach_flat(cp.base)


@given(ms, pos, st.fractions(min_value=F(11, 10), max_value=30, max_denominator=20), pos)
def test_cone_solver_matches_closed_form(m, a, x, w):
    cp = profile_from_cone(m, a, x, w)
    pr = cp.base
    assert (pr.q0, pr.q1, pr.q3, pr.q4) == cone_printed_coefficients(m, a, x, w)
    assert cp.end_residuals() == (0, 0)


def test_degenerate_polytope():
    with pytest.raises(DegeneratePolytopeError):
        profile_from_cone(1, 1, 1, 2)


# ---------------------------------------------------------------- S and scal


def test_taub_bolt_einstein_constant_zero():
    ec = einstein_constant(profile_from_local(1, 1, 6))
    assert ec.value == 0 and ec.y_form == 0


@pytest.mark.parametrize("m", [3, 4, 7])
def test_ricci_flat_row(m):
    assert einstein_constant(profile_from_local(m, 1, -6 * (m - 2))).value == 0


def test_einstein_constant_factor_two():
    # coefficient form 12 q4^2 q1 + 8 q3^3 + 48 q3 q4 fixes the y form as -2 y^2 (y + 6(m-2)) / a^3
    ec = einstein_constant(profile_from_local(3, 1, 12))
    assert ec.value == ec.y_form == -5184


@given(ms, pos, svals)
def test_two_einstein_forms_agree(m, a, s):
    ec = einstein_constant(profile_from_local(m, a, s))
    assert ec.coefficient_form == ec.y_form


def test_vanishing_locus_cases():
    assert vanishing_locus(profile_from_local(2, 1, 0)).kind == "IdenticallyZero"
    assert vanishing_locus(profile_from_local(3, 1, -4)).kind == "ConstantNonzero"
    v = vanishing_locus(profile_from_local(3, 1, 4))
    assert v.kind == "VanishesAt" and v.r_star == F(5, 2)
    assert vanishing_locus(profile_from_local(1, 1, 2)).kind == "NeverVanishes"
    assert scalar_curvature(profile_from_local(1, 1, 6)).poly == Poly([9, -3])
