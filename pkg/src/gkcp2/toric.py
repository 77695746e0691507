"""Symplectic-coordinate description of toric surfaces.

A Delzant polygon ``{y : <v_a, y> + lam_a >= 0}`` determines the potential

    G(y) = 1/2 sum_a l_a(y) log l_a(y),    l_a(y) = <v_a, y> + lam_a

whose Hessian ``G_ij`` is the metric on the base and whose inverse ``G^ij``
is the metric on the torus fibre.  Coordinates on the 4-manifold are ordered
``(theta1, theta2, y1, y2)`` throughout; matrices are indexed
``m[row, col] = T^row_col``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryError, DomainError, InvalidCornerError

FACE_TOL = 1e-9


def cross(u, v) -> float:
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class DelzantPolygon:
    normals: tuple[tuple[int, int], ...]
    offsets: tuple[float, ...]

    def __post_init__(self):
        if len(self.normals) != len(self.offsets) or len(self.normals) < 3:
            raise DomainError("need at least three faces with one offset each")
        n = len(self.normals)
        for a in range(n):
            if cross(self.normals[a], self.normals[(a + 1) % n]) != 1:
                raise InvalidCornerError(f"corner {a}: normals do not form a Z-basis")

    def faces(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        v = np.asarray(self.normals, dtype=float)
        return y @ v.T + np.asarray(self.offsets)

    def corners(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        n = len(self.normals)
        return [(self.normals[a], self.normals[(a + 1) % n]) for a in range(n)]

    @property
    def is_cp2(self) -> bool:
        return sorted(zip(self.normals, self.offsets)) == sorted(zip(CP2.normals, CP2.offsets))


CP2 = DelzantPolygon(normals=((1, 0), (0, 1), (-1, -1)), offsets=(0.0, 0.0, 1.0))
SQUARE = DelzantPolygon(normals=((1, 0), (0, 1), (-1, 0), (0, -1)), offsets=(0.0, 0.0, 1.0, 1.0))


@dataclass(frozen=True)
class GuilleminData:
    G: float
    grad: np.ndarray
    hess: np.ndarray
    hess_inv: np.ndarray


def _check_interior(poly: DelzantPolygon, y) -> np.ndarray:
    ell = poly.faces(y)
    if np.any(ell <= FACE_TOL):
        raise BoundaryError(f"point {tuple(y)} on or outside a face")
    return ell


def guillemin(poly: DelzantPolygon, y) -> GuilleminData:
    ell = _check_interior(poly, y)
    v = np.asarray(poly.normals, dtype=float)
    G = 0.5 * float(np.sum(ell * np.log(ell)))
    grad = 0.5 * v.T @ (np.log(ell) + 1.0)
    hess = 0.5 * (v.T / ell) @ v
    return GuilleminData(G, grad, hess, np.linalg.inv(hess))


def complex_structure_ytheta(poly: DelzantPolygon, y) -> np.ndarray:
    """J = G_ij d_theta_i (x) dy^j - G^ij d_y^i (x) d theta_j."""
    gd = guillemin(poly, y)
    J = np.zeros((4, 4))
    J[:2, 2:] = gd.hess
    J[2:, :2] = -gd.hess_inv
    return J


def metric_ytheta(poly: DelzantPolygon, y) -> np.ndarray:
    gd = guillemin(poly, y)
    g = np.zeros((4, 4))
    g[:2, :2] = gd.hess_inv
    g[2:, 2:] = gd.hess
    return g


def symplectic_ytheta() -> np.ndarray:
    """omega = dy^1 ^ dtheta_1 + dy^2 ^ dtheta_2 as an antisymmetric matrix."""
    w = np.zeros((4, 4))
    for i in range(2):
        w[2 + i, i] = 1.0
        w[i, 2 + i] = -1.0
    return w


def log_xi(poly: DelzantPolygon, y, theta) -> np.ndarray:
    """log of the toric coordinates xi_i = exp(i theta_i + G_i)."""
    gd = guillemin(poly, y)
    return 1j * np.asarray(theta, dtype=float) + gd.grad


def _corner_inverse(u1, u2) -> np.ndarray:
    if cross(u1, u2) != 1:
        raise InvalidCornerError("corner normals must have cross product 1")
    return np.array([[u2[1], -u2[0]], [-u1[1], u1[0]]])


def complex_coords(poly: DelzantPolygon, y, theta, corner=None) -> np.ndarray:
    """Holomorphic coordinates (z1, z2) of the C^2 chart at ``corner``.

    ``corner`` is a pair of normals; defaults to the first corner of ``poly``.
    """
    u1, u2 = corner if corner is not None else poly.corners()[0]
    return np.exp(_corner_inverse(u1, u2) @ log_xi(poly, y, theta))


def transition_matrix(u_normals, v_normals) -> np.ndarray:
    """Integer matrix A with z~_a = prod_b z_b ** A[a, b] between two corners."""
    u1, u2 = u_normals
    v1, v2 = v_normals
    if cross(u1, u2) != 1 or cross(v1, v2) != 1:
        raise InvalidCornerError("corner normals must have cross product 1")
    A = np.array([[cross(u1, v2), cross(u2, v2)], [cross(v1, u1), cross(v1, u2)]], dtype=int)
    return A


def monomial(z, A) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.array([np.prod(z ** A[a]) for a in range(A.shape[0])])


def _require_cp2(poly: DelzantPolygon) -> None:
    if not poly.is_cp2:
        raise DomainError("closed form only available for the CP^2 triangle")


def hess_inv_cp2(y) -> np.ndarray:
    y1, y2 = y
    return 2.0 * np.array([[y1 * (1 - y1), -y1 * y2], [-y1 * y2, y2 * (1 - y2)]])


def poisson_norm(y, poly: DelzantPolygon = CP2) -> float:
    """|sigma|^2 = det(G_ij)^{-1} / 2 for the invariant holomorphic Poisson tensor."""
    _require_cp2(poly)
    gd = guillemin(poly, y)
    return 0.5 / float(np.linalg.det(gd.hess))


def poisson_norm_closed(y) -> float:
    y1, y2 = y
    return 2.0 * y1 * y2 * (1.0 - y1 - y2)


def hitchin_Q_ytheta(y, poly: DelzantPolygon = CP2) -> np.ndarray:
    """Q = 4 y1 y2 y3 d_y1 ^ d_y2 - d_theta1 ^ d_theta2 (bivector matrix)."""
    _require_cp2(poly)
    _check_interior(poly, y)
    y1, y2 = y
    c = 4.0 * y1 * y2 * (1.0 - y1 - y2)
    Q = np.zeros((4, 4))
    Q[2, 3], Q[3, 2] = c, -c
    Q[0, 1], Q[1, 0] = -1.0, 1.0
    return Q


def schouten_residual(bivector, x, h: float = 1e-5) -> float:
    """Max |[P, P]^{ijk}| for a bivector field on R^4 by central differences.

    ``bivector(x)`` returns a 4x4 matrix; the cyclic sum
    ``P^{il} d_l P^{jk} + P^{jl} d_l P^{ki} + P^{kl} d_l P^{ij}`` is returned.
    """
    x = np.asarray(x, dtype=float)
    P = bivector(x)
    dP = np.zeros((4, 4, 4))
    for l in range(4):
        e = np.zeros(4)
        e[l] = h
        dP[l] = (bivector(x + e) - bivector(x - e)) / (2 * h)
    t = np.einsum("il,ljk->ijk", P, dP)
    cyc = t + np.transpose(t, (1, 2, 0)) + np.transpose(t, (2, 0, 1))
    return float(np.max(np.abs(cyc)))


def y_from_z(z) -> np.ndarray:
    """Inverse of the CP^2 chart at the origin: y^i = |z^i|^2 / (1 + |z|^2)."""
    a = np.abs(np.asarray(z)) ** 2
    return a / (1.0 + a.sum())


def cp2_z_closed(y, theta) -> np.ndarray:
    y1, y2 = y
    y3 = 1.0 - y1 - y2
    return np.array([math.sqrt(y1 / y3), math.sqrt(y2 / y3)]) * np.exp(1j * np.asarray(theta))
