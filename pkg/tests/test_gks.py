import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gkcp2 import elliptic as ell, gks
from gkcp2.checks import small_dt_law
from gkcp2.errors import DomainError, StencilError
from gkcp2.flow import PolarPoint

POINTS = [(0.004, 0.3, 0.7), (0.0185, 2.5, 1.2), (0.031, 4.9, 0.05), (0.026, 6.2, 1.9)]
c3s = st.floats(0.003, 0.034)
ss = st.floats(0.0, 2 * math.pi, exclude_max=True)
dts = st.floats(0.01, 2.0)


@pytest.mark.parametrize("c3, s, dt", POINTS)
def test_defining_identities(c3, s, dt):
    rep = gks.gks_report(PolarPoint(c3, s), dt, with_nijenhuis=False)
    assert rep.residual_I2 < 1e-9
    assert rep.residual_GKS_I < 1e-8
    assert rep.residual_GKS_II < 1e-8
    assert rep.residual_hermitian_plus < 1e-8
    assert rep.residual_hermitian_minus < 1e-8


@given(c3s, ss, dts)
@settings(max_examples=40, deadline=None)
def test_gks_identities_property(c3, s, dt):
    im = gks.i_minus_matrix(c3, s)
    ip = gks.i_plus_matrix(c3, s, dt)
    q, f = gks.q_matrix(c3), gks.f_matrix(c3, s, dt)
    scale = max(1.0, np.max(np.abs(f)))
    assert np.max(np.abs(ip - im + q @ f)) < 1e-8 * scale
    assert np.max(np.abs(im.T @ f + f @ ip)) < 1e-8 * scale


def test_zero_flow_time():
    c3, s = 0.02, 1.0
    np.testing.assert_allclose(gks.i_plus_matrix(c3, s, 0.0), gks.i_minus_matrix(c3, s), atol=1e-14)
    assert not np.any(gks.f_matrix(c3, s, 0.0))


def test_flow_period_returns_i_plus_to_shifted_frame():
    # after a full period of s the point returns but the c3-dependence of the shift remains
    c3, s = 0.02, 1.0
    dt = 2 * PolarPoint(c3, s).lattice.omega1
    ip = gks.i_plus_matrix(c3, s, dt)
    d = gks.flow_pushforward(c3, dt)
    np.testing.assert_allclose(ip, np.linalg.inv(d) @ gks.i_minus_matrix(c3, s) @ d, atol=1e-10)


def test_block_structure():
    im = gks.I_minus(PolarPoint(0.02, 0.5)).m
    assert not np.any(im[:2, :2]) and not np.any(im[2:, 2:])


@pytest.mark.parametrize("c3, s, dt", POINTS[:2])
def test_metric_positive_and_commutator(c3, s, dt):
    g = gks.metric_matrix(c3, s, dt)
    np.testing.assert_allclose(g, g.T, atol=1e-14)
    assert np.linalg.eigvalsh(g)[0] > 0
    im, ip, q = gks.i_minus_matrix(c3, s), gks.i_plus_matrix(c3, s, dt), gks.q_matrix(c3)
    np.testing.assert_allclose((ip @ im - im @ ip) @ np.linalg.inv(g), q, atol=1e-7 * np.max(np.abs(q)))


def test_positivity_scan_small_grid():
    res = gks.positivity_scan(0.05, n_c3=4, n_s=4, n_theta=2)
    assert res.n_points == 32
    assert res.min_eigenvalue > 0


def test_positivity_scan_range_guard():
    with pytest.raises(DomainError):
        gks.positivity_scan(0.05, c3_range=(0.0, 0.02))


def test_sigma_is_holomorphic_poisson():
    p = PolarPoint(0.015, 3.3)
    for imat in (gks.i_minus_matrix(p.c3, p.s), gks.i_plus_matrix(p.c3, p.s, 0.8)):
        sig = gks.sigma_complex(imat, gks.q_matrix(p.c3))
        assert np.max(np.abs(gks.type_projection(sig, imat, holomorphic=False))) < 1e-9
        assert np.max(np.abs(gks.type_projection(sig, imat, holomorphic=True))) > 1e-3
        assert np.max(np.abs(gks.one_one_part(gks.q_matrix(p.c3), imat))) < 1e-9
    re, im = gks.sigma_pm(p, 0.8)
    assert re.kind is gks.Kind.SIGMA_PLUS_RE and im.kind is gks.Kind.SIGMA_PLUS_IM


def test_integrability():
    p = PolarPoint(0.02, 1.1)
    assert gks.nijenhuis(gks.Kind.I_MINUS, p) < 1e-6
    assert gks.nijenhuis("I_plus", p, 0.6) < 1e-5
    assert gks.exterior_derivative_residual(p.c3, p.s, 0.6) < 1e-6
    with pytest.raises(DomainError):
        gks.nijenhuis(gks.Kind.Q, p)


def test_stencil_leaves_band():
    with pytest.raises(StencilError):
        gks.jacobian_of_field(gks.i_minus_matrix, ell.DEFAULT_GUARD[0], 1.0)


def test_F_periodic_in_s():
    f0 = gks.f_matrix(0.02, 0.4, 0.9)
    np.testing.assert_allclose(gks.f_matrix(0.02, 0.4 + 2 * math.pi, 0.9), f0, atol=1e-12)


def test_y_integrals_match_quadrature():
    from scipy.integrate import quad

    from gkcp2.flow import y_array

    c3, s, dt = 0.017, 2.0, 0.8
    w1 = PolarPoint(c3, s).lattice.omega1
    ref = [quad(lambda t: y_array(c3, s + math.pi * t / w1)[i], 0.0, dt, epsabs=1e-13)[0] for i in range(2)]
    np.testing.assert_allclose(gks.y_integrals(c3, s, dt), ref, atol=1e-11)


def test_small_dt_law_is_first_order():
    # F/dt approaches d(I^* dh) linearly in dt; one Richardson step removes the O(dt) term
    c3, s = 0.02, 1.3
    e1, r1 = small_dt_law(c3, s, 1e-3)
    e2, _ = small_dt_law(c3, s, 5e-4)
    assert e1 / e2 == pytest.approx(2.0, rel=0.01)
    assert r1 < 1e-5


def test_field_sample_kinds():
    p = PolarPoint(0.02, 0.5)
    assert gks.Q_polar(p).kind is gks.Kind.Q
    assert gks.F_two_form(p, 0.1).dt == 0.1
    assert gks.metric(p, 0.1).kind is gks.Kind.G
    assert gks.I_plus(p, 0.1).kind is gks.Kind.I_PLUS
