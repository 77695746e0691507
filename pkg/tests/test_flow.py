import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gkcp2 import flow
from gkcp2.checks import fd_step
from gkcp2.errors import DomainError
from gkcp2.flow import PolarPoint, TriplePoint

c3s = st.floats(0.002, 0.035)
ss = st.floats(0.0, 2 * math.pi, exclude_max=True)


@given(c3s, ss)
@settings(max_examples=40, deadline=None)
def test_contour_invariants(c3, s):
    y = flow.y_array(c3, s)
    assert abs(y.sum() - 1.0) < 1e-12
    assert abs(y.prod() - c3) < 1e-11 * c3
    assert np.all(y > 0)


@given(c3s, ss)
@settings(max_examples=30, deadline=None)
def test_two_formulas_agree(c3, s):
    np.testing.assert_allclose(flow.y_array(c3, s), flow.y_via_zeta_array(c3, s), atol=1e-10)


def test_symmetric_start_and_orientation():
    y0 = flow.y_array(0.02, 0.0)
    assert y0[0] == pytest.approx(y0[1], abs=1e-13)
    assert y0[2] < y0[0]
    # y^2 decreases as s leaves 0
    assert flow.dy_ds_array(0.02, 0.0)[1] < 0
    assert flow.y_array(0.02, 0.1)[1] < y0[1]


def test_cyclic_shift():
    s = 0.7
    y = flow.y_array(0.015, s)
    y_shift = flow.y_array(0.015, s + 2 * math.pi / 3)
    np.testing.assert_allclose(y_shift, np.roll(y, -1), atol=1e-12)


@pytest.mark.parametrize("c3", [0.003, 0.0185, 0.034])
def test_dy_dc3_against_differences(c3):
    s = np.linspace(0.0, 6.0, 7)
    h = fd_step(c3)
    fd = (flow.y_array(c3 + h, s) - flow.y_array(c3 - h, s)) / (2 * h)
    exact = flow.dy_dc3_array(c3, s)
    assert np.max(np.abs(exact - fd)) < 1e-6 * max(1.0, np.max(np.abs(exact)))


def test_dy_ds_against_differences():
    s, h = 1.3, 1e-5
    fd = (flow.y_array(0.02, s + h) - flow.y_array(0.02, s - h)) / (2 * h)
    np.testing.assert_allclose(flow.dy_ds_array(0.02, s), fd, atol=1e-9)


@given(c3s, ss)
@settings(max_examples=30, deadline=None)
def test_flow_equation(c3, s):
    assert np.max(np.abs(flow.flow_residual(c3, s))) < 1e-9


@given(c3s, ss)
@settings(max_examples=25, deadline=None)
def test_polar_round_trip(c3, s):
    y = flow.y_array(c3, s)
    p = flow.polar_of_y(y[0], y[1])
    assert p.c3 == pytest.approx(c3, rel=1e-12)
    assert abs(math.remainder(p.s - s, 2 * math.pi)) < 1e-9


def test_polar_outside_triangle():
    with pytest.raises(DomainError):
        flow.polar_of_y(0.8, 0.4)


@pytest.mark.parametrize("dt", [0.3, 1.7, 5.0])
def test_flow_map_matches_runge_kutta(dt):
    p = PolarPoint(0.021, 2.2)
    closed = flow.y_of_polar(flow.flow_map(p, dt)).as_array()
    rk = flow.ode_oracle(flow.y_of_polar(p), dt).as_array()
    np.testing.assert_allclose(closed, rk, atol=1e-10)


def test_flow_map_is_a_group_action():
    p = PolarPoint(0.01, 0.4)
    a = flow.flow_map(flow.flow_map(p, 0.8), 1.1)
    b = flow.flow_map(p, 1.9)
    assert abs(math.remainder(a.s - b.s, 2 * math.pi)) < 1e-13


def test_full_period_returns():
    p = PolarPoint(0.01, 0.4)
    q = flow.flow_map(p, 2 * p.lattice.omega1)
    assert abs(math.remainder(q.s - p.s, 2 * math.pi)) < 1e-12


def test_jacobian_determinant():
    for c3, s in [(0.005, 1.0), (0.02, 3.0), (0.033, 5.5)]:
        # d(c3, s)/d(y1, y2) has determinant pi/omega1
        det = np.linalg.det(np.linalg.inv(flow.jacobian_polar(c3, s)))
        assert det == pytest.approx(math.pi / PolarPoint(c3, s).lattice.omega1, rel=1e-8)


def test_triple_point_product():
    t = TriplePoint(0.2, 0.3, 0.5)
    assert t.c3 == pytest.approx(0.03)


def test_polar_point_reduces_s():
    assert PolarPoint(0.02, 2 * math.pi + 0.5).s == pytest.approx(0.5)
    assert PolarPoint(0.02, -0.5).s == pytest.approx(2 * math.pi - 0.5)


def test_polar_inverse_at_rounding_floor():
    # Newton on the angle stalls at ~1e-13 here instead of reaching a 1e-14 step
    y = flow.y_array(0.002, 4.84375)
    p = flow.polar_of_y(y[0], y[1])
    assert isinstance(p.c3, float)
    assert abs(p.s - 4.84375) < 1e-10
