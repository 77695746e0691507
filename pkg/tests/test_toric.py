import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gkcp2 import toric
from gkcp2.errors import BoundaryError, DomainError, InvalidCornerError
from gkcp2.toric import CP2, SQUARE

CENTRE = np.array([1 / 3, 1 / 3])


@st.composite
def triangle_points(draw):
    a = draw(st.floats(0.02, 0.96))
    b = draw(st.floats(0.02, 0.96))
    if a + b >= 0.98:
        a, b = 0.98 - a, 0.98 - b
    return np.array([max(a, 0.01), max(b, 0.01)])


def test_hessian_at_centre():
    gd = toric.guillemin(CP2, CENTRE)
    np.testing.assert_allclose(gd.hess, [[3.0, 1.5], [1.5, 3.0]], atol=1e-14)
    np.testing.assert_allclose(gd.hess_inv, [[4 / 9, -2 / 9], [-2 / 9, 4 / 9]], atol=1e-14)
    assert toric.poisson_norm(CENTRE) == pytest.approx(2 / 27, abs=1e-15)


def test_potential_gradient_by_differences():
    y, h = np.array([0.2, 0.5]), 1e-6
    gd = toric.guillemin(CP2, y)
    for i in range(2):
        e = np.zeros(2)
        e[i] = h
        fd = (toric.guillemin(CP2, y + e).G - toric.guillemin(CP2, y - e).G) / (2 * h)
        assert fd == pytest.approx(gd.grad[i], abs=1e-8)


@given(triangle_points())
@settings(max_examples=40, deadline=None)
def test_complex_structure_and_metric(y):
    J = toric.complex_structure_ytheta(CP2, y)
    g = toric.metric_ytheta(CP2, y)
    w = toric.symplectic_ytheta()
    np.testing.assert_allclose(J @ J, -np.eye(4), atol=1e-10)
    np.testing.assert_allclose(J.T @ g @ J, g, atol=1e-9)
    np.testing.assert_allclose(w @ J, g, atol=1e-9)
    assert np.linalg.eigvalsh(g)[0] > 0


@given(triangle_points())
@settings(max_examples=40, deadline=None)
def test_closed_forms(y):
    gd = toric.guillemin(CP2, y)
    np.testing.assert_allclose(gd.hess_inv, toric.hess_inv_cp2(y), atol=1e-12)
    assert toric.poisson_norm(y) == pytest.approx(toric.poisson_norm_closed(y), rel=1e-12)


def test_square_is_kahler_too():
    y = np.array([0.3, 0.6])
    J = toric.complex_structure_ytheta(SQUARE, y)
    np.testing.assert_allclose(J @ J, -np.eye(4), atol=1e-12)
    assert not SQUARE.is_cp2 and CP2.is_cp2
    with pytest.raises(DomainError):
        toric.poisson_norm(y, SQUARE)


def test_boundary_and_corner_errors():
    with pytest.raises(BoundaryError):
        toric.guillemin(CP2, [0.0, 0.5])
    with pytest.raises(BoundaryError):
        toric.guillemin(CP2, [0.7, 0.7])
    with pytest.raises(InvalidCornerError):
        toric.DelzantPolygon(normals=((1, 0), (1, 1), (-1, -1)), offsets=(0.0, 0.0, 1.0))
    with pytest.raises(InvalidCornerError):
        toric.transition_matrix(((1, 0), (1, 0)), ((0, 1), (-1, -1)))


def test_inhomogeneous_coordinates():
    y, th = np.array([0.25, 0.15]), np.array([0.3, -1.2])
    z = toric.complex_coords(CP2, y, th)
    np.testing.assert_allclose(z, toric.cp2_z_closed(y, th), atol=1e-14)
    np.testing.assert_allclose(toric.y_from_z(z), y, atol=1e-14)


@pytest.mark.parametrize("a, b", [(0, 1), (1, 2), (2, 0), (0, 2)])
def test_corner_transitions(a, b):
    y, th = np.array([0.2, 0.45]), np.array([0.9, 2.1])
    corners = CP2.corners()
    A = toric.transition_matrix(corners[a], corners[b])
    assert round(abs(np.linalg.det(A))) == 1
    za = toric.complex_coords(CP2, y, th, corners[a])
    zb = toric.complex_coords(CP2, y, th, corners[b])
    np.testing.assert_allclose(toric.monomial(za, A), zb, atol=1e-12)


def test_hitchin_Q_is_poisson():
    def bivector(x):
        return toric.hitchin_Q_ytheta(x[2:])

    assert toric.schouten_residual(bivector, np.array([0.1, 0.2, 0.3, 0.25])) < 1e-9


def test_schouten_detects_non_poisson():
    def bivector(x):
        p = np.zeros((4, 4))
        p[0, 1], p[1, 0] = 1.0, -1.0
        p[2, 3], p[3, 2] = x[0], -x[0]
        return p

    assert toric.schouten_residual(bivector, np.zeros(4)) > 0.5


def test_hitchin_Q_is_type_2_0():
    y = np.array([0.2, 0.3])
    J = toric.complex_structure_ytheta(CP2, y)
    Q = toric.hitchin_Q_ytheta(y)
    np.testing.assert_allclose(Q + J @ Q @ J.T, 0.0, atol=1e-12)
    assert toric.hitchin_Q_ytheta(y)[2, 3] == pytest.approx(4 * 0.2 * 0.3 * 0.5)
    assert math.isclose(toric.cross((1, 2), (3, 4)), -2)
