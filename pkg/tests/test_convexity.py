from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from calabi.ansatz import cone_limit_profile, profile_from_cone, profile_from_local
from calabi.conesolver import cone_quadratic
from calabi.convexity import appendixA_quantities, certify_positive, hessian_identities, sign_table
from calabi.identities import run_suite

XGRID = [F(5, 2), F(27, 10), F(3), F(7, 2), F(5), F(7), F(15), F(101, 7), F(40)]


def test_taub_bolt_weight_certified():
    cert = certify_positive(profile_from_cone(1, 1, 3, F(12, 11)))
    assert cert.positive and not cert.interior_roots
    assert cert.recheck()


def test_taub_bolt_limit_double_root_at_end():
    cert = certify_positive(cone_limit_profile(1, 1, 3), 3)
    assert cert.positive
    assert cert.ends["p(b)"] == 0 and cert.ends["p'(b)"] == 0


def test_tampered_profile_fails_with_witness():
    base = profile_from_cone(1, 1, 3, F(12, 11)).base
    cert = certify_positive(base.with_q(q0=base.q0 + 10), 3)
    assert not cert.positive
    # p stays negative on the whole interval, so the evidence is a point, not a root
    assert cert.witness is not None
    assert base.with_q(q0=base.q0 + 10).p_poly(cert.witness) < 0


def test_interior_root_reported():
    # p vanishes at 1 + sqrt 3, inside (1, 4)
    cert = certify_positive(profile_from_local(1, 1, 4), 4)
    assert not cert.positive
    (root,) = cert.interior_roots
    assert root.lo < F(274, 100) and root.hi > F(273, 100)


@pytest.mark.parametrize("m", [1, 3, 4, 5, 8])
def test_solver_weights_certify(m):
    for x in XGRID:
        try:
            cq = cone_quadratic(m, x)
        except Exception:
            continue
        for w in cq.weights:
            cert = certify_positive(profile_from_cone(m, 1, x, w))
            assert cert.positive, (m, x, w)
            q = appendixA_quantities(m, x, w)
            assert q.degenerate or q.disc_identity


@pytest.mark.parametrize("m", range(1, 9))
def test_sign_tables_match(m):
    for x in (F(11, 10), F(2), F(3), F(4), F(7), F(40), F(200)):
        t = sign_table(m, x)
        assert t["never_all_positive"]
        assert t["matches_printed"], (m, x, t["case"], t["rows"])


def test_appendix_a_suite():
    assert all(rep.holds == e.expect for e, rep in run_suite("appendixA"))


@given(
    st.sampled_from([(1, 1, 6), (3, 1, 12), (2, 1, 0), (3, 1, -4)]),
    st.fractions(min_value=F(1, 10), max_value=F(9, 10), max_denominator=50),
    st.fractions(min_value=F(1, 100), max_value=F(99, 100), max_denominator=100),
)
def test_hessian_closed_forms(params, t, u):
    pr = profile_from_local(*params)
    r = pr.a + 2 * t  # every sampled profile is positive on (a, 3a)
    x1, x2 = r * u, r * (1 - u)
    assert hessian_identities(pr, x1, x2)["holds"]
