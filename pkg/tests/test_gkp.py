import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gkcp2 import gkp
from gkcp2.errors import DomainError, QuadratureError
from gkcp2.flow import PolarPoint, y_array


def test_zero_flow_time():
    v = gkp.potential(PolarPoint(0.02, 1.0), 0.0)
    assert (v.K, v.fubini_study_part, v.correction_part) == (0.0, 0.0, 0.0)


@given(st.floats(0.003, 0.034), st.floats(0.0, 6.28), st.floats(0.01, 3.0))
@settings(max_examples=20, deadline=None)
def test_parts_sum_to_K(c3, s, dt):
    v = gkp.potential(PolarPoint(c3, s), dt)
    assert v.K == pytest.approx(v.fubini_study_part + v.correction_part, abs=1e-15)
    assert v.fubini_study_part == pytest.approx(0.25 * dt * math.log(c3))


def test_reproducible_reference_point():
    a = gkp.potential(PolarPoint(0.02, 1.0), 0.5)
    b = gkp.potential(PolarPoint(0.02, 1.0), 0.5)
    assert abs(a.K - b.K) < 1e-10


def test_slope_at_zero():
    for c3 in (0.005, 0.02, 0.035):
        assert abs(gkp.slope_at_zero(PolarPoint(c3, 2.0)) - 0.25 * math.log(c3)) < 1e-6


def test_second_derivative_in_time():
    # d^2K/dt^2 at 0 is (3/8) sum_i y^i d/dt log y^i = (3/8) sum_i y^i (y^{i+1} - y^{i+2}) = 0 along the flow,
    # so K is linear in dt to second order; compare against the third-order term being small
    p, h = PolarPoint(0.02, 2.0), 1e-3
    k = [gkp.potential(p, j * h).K for j in range(3)]
    assert abs((k[2] - 2 * k[1] + k[0]) / h**2) < 1e-2


def test_quadrature_oracles():
    p = PolarPoint(0.012, 4.0)
    v = gkp.potential(p, 1.3)
    assert abs(v.correction_part - gkp.correction_trapezoid(p, 1.3)) < 1e-8
    assert abs(v.correction_part - gkp.correction_u_form(p, 1.3)) < 1e-10


def test_integrate_doubling_polynomial():
    val, order = gkp.integrate_doubling(lambda t: t**5 - 2 * t, 0.0, 2.0, 8)
    assert val == pytest.approx(64 / 6 - 4, abs=1e-13)
    assert order == 16


def test_quadrature_failure(monkeypatch):
    monkeypatch.setattr(gkp, "MAX_ROUNDS", 1)
    with pytest.raises(QuadratureError):
        gkp.integrate_doubling(lambda t: np.sin(400 * t), 0.0, 1.0, 8)


def test_domain_errors():
    p = PolarPoint(0.02, 1.0)
    with pytest.raises(DomainError):
        gkp.potential(p, -0.1)
    with pytest.raises(DomainError):
        gkp.potential(p, 0.1, quad_order=4)


def test_local_coordinates():
    p, th = PolarPoint(0.02, 1.0), np.array([0.3, 1.1])
    y0 = y_array(p.c3, p.s)
    q0 = gkp.local_Q_coords(p, 0.0, th)
    np.testing.assert_allclose(q0, np.sqrt(y0[:2] / y0[2]) * np.exp(1j * th), atol=1e-14)
    dt = 0.7
    yt = y_array(p.c3, p.s + math.pi * dt / p.lattice.omega1)
    q = gkp.local_Q_coords(p, dt, th)
    np.testing.assert_allclose(np.abs(q) ** 4, y0[:2] * yt[:2] / (y0[2] * yt[2]), rtol=1e-13)


def test_correction_bounded_towards_face():
    rep = gkp.correction_regularity_check([1e-2, 1e-3, 1e-4, 1e-5], s=1.0, dt=0.5)
    assert rep.bounded
    assert rep.fubini_study[-1] < rep.fubini_study[0] < 0
