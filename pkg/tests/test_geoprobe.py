from fractions import Fraction as F

import mpmath
import pytest

from calabi.ansatz import profile_from_local
from calabi.errors import DomainError, ParameterError
from calabi.geoprobe import endpoint_exponent, growth_csv, growth_exponent, ray_length, volume

TAUB_BOLT = profile_from_local(1, 1, 6)


def test_incomplete_end_has_finite_length():
    pr = profile_from_local(3, 1, 5)  # p quartic, no root above a
    rl = ray_length(pr, None, "inf")
    assert not rl.diverges
    # independent check: substitute r = a + u^2 to remove the endpoint singularity
    p = pr.p_poly
    with mpmath.workdps(30):
        cs = [mpmath.mpf(c.numerator) / c.denominator for c in p.coeffs]
        f = lambda u: 2 * u * mpmath.sqrt((1 + u * u) / (2 * mpmath.polyval(cs[::-1], 1 + u * u)))  # noqa: E731
        ref = mpmath.quad(f, [0, 1, mpmath.inf])
    assert abs(rl.value - ref) < 1e-8


def test_taub_bolt_double_root_diverges():
    rl = ray_length(TAUB_BOLT, None, 3)
    assert rl.diverges and rl.endpoint == 3 and rl.exponent == 1


def test_taub_bolt_conformal_diverges_like_inverse_distance():
    rl = ray_length(TAUB_BOLT, None, 3, conformal=True)
    assert rl.diverges and rl.exponent == 2


def test_finite_segment():
    rl = ray_length(TAUB_BOLT, None, F(5, 2))
    assert not rl.diverges and rl.value > 0


def test_root_inside_range_is_domain_error():
    with pytest.raises(DomainError):
        ray_length(TAUB_BOLT, None, "inf")


def test_bad_range():
    with pytest.raises(ParameterError):
        ray_length(TAUB_BOLT, 2, 2)


def test_volume_closed_form_and_quadrature():
    v = volume(TAUB_BOLT, 3)
    assert abs(v - 2 * mpmath.pi**2 * 8) < 1e-20
    assert abs(volume(TAUB_BOLT, 3, method="quad") - v) < 1e-15
    assert volume(TAUB_BOLT, 1) == 0


def test_conformal_volume_diverges_at_scal_zero():
    assert volume(TAUB_BOLT, 3, conformal=True) == mpmath.inf
    assert volume(TAUB_BOLT, F(29, 10), conformal=True) < mpmath.inf


def test_endpoint_exponents():
    assert endpoint_exponent(profile_from_local(2, 1, 0), None) == F(1, 2)
    assert endpoint_exponent(profile_from_local(3, 1, -4), None) == 1
    assert endpoint_exponent(TAUB_BOLT, 3, conformal=True) == 2


def test_quartic_growth_scalar_flat():
    est = growth_exponent(profile_from_local(2, 1, 0))
    assert est.model == "polynomial"
    assert abs(est.value - 4) < 0.1


def test_taub_bolt_conformal_cubic_growth():
    est = growth_exponent(TAUB_BOLT, conformal=True)
    assert est.model == "polynomial"
    assert abs(est.value - 3) < 0.1


@pytest.mark.parametrize("a", [F(1), F(2, 3), F(3, 2), F(4)])
def test_kahler_einstein_rate_scales_with_a(a):
    # p ~ r^3 / (3a) at infinity, so log Vol / R tends to 2 sqrt(2 / (3a))
    est = growth_exponent(profile_from_local(3, a, -4 / a))
    assert est.model == "exponential"
    assert abs(est.value - 2 * mpmath.sqrt(F(2) / (3 * a))) < 0.02


def test_incomplete_refuses_growth():
    with pytest.raises(DomainError):
        growth_exponent(profile_from_local(3, 1, 5))


def test_growth_csv():
    text = growth_csv(growth_exponent(profile_from_local(2, 1, 0), samples=20))
    lines = text.strip().split("\n")
    assert lines[0] == "ell,R,volume" and len(lines) == 21
