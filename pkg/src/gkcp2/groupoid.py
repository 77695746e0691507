"""Holomorphic symplectic groupoid integrating sigma = i z1 z2 d_1 ^ d_2.

Points are ``(z1, z2, xi1, xi2)`` in one corner chart of T*M.  Forms and
bivectors are complex antisymmetric 4x4 matrices in that coordinate order,
``m[a, b]`` holding the coefficient of ``dx^a ^ dx^b`` (resp.
``d_a ^ d_b``) for ``a < b``.  With this layout ``omega0(g) @ pi_bivector(g)``
is the identity.

All maps here are holomorphic, so their Jacobians are complex 2x4 or 4x4
matrices of holomorphic partials, written out analytically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ComposabilityError, JacobianError
from .toric import monomial

Z1, Z2, X1, X2 = range(4)
COMPOSE_TOL = 1e-9


@dataclass(frozen=True)
class GroupoidPoint:
    z1: complex
    z2: complex
    xi1: complex
    xi2: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.z1, self.z2, self.xi1, self.xi2], dtype=complex)

    @classmethod
    def from_array(cls, a) -> "GroupoidPoint":
        return cls(*(complex(x) for x in a))


@dataclass(frozen=True)
class DarbouxPoint:
    q1: complex
    q2: complex
    p1: complex
    p2: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.q1, self.q2, self.p1, self.p2], dtype=complex)


def _antisym(entries: dict[tuple[int, int], complex]) -> np.ndarray:
    m = np.zeros((4, 4), dtype=complex)
    for (a, b), v in entries.items():
        m[a, b] += v
        m[b, a] -= v
    return m


def omega0(g: GroupoidPoint) -> np.ndarray:
    """The holomorphic symplectic form Omega_0 at ``g``."""
    z1, z2, x1, x2 = g.as_array()
    i_omega = _antisym(
        {
            (Z1, Z2): -x1 * x2,
            (Z1, X2): -x1 * z2,
            (Z1, X1): 1.0,
            (Z2, X2): 1.0,
            (Z2, X1): x2 * z1,
            (X1, X2): -z1 * z2,
        }
    )
    return -1j * i_omega


def pi_bivector(g: GroupoidPoint) -> np.ndarray:
    """The Poisson bivector Pi, stated in closed form (not by inversion)."""
    z1, z2, x1, x2 = g.as_array()
    minus_i_pi = _antisym(
        {
            (X1, Z1): 1.0,
            (X2, Z2): 1.0,
            (X1, X2): -x1 * x2,
            (X1, Z2): x1 * z2,
            (X2, Z1): -x2 * z1,
            (Z1, Z2): -z1 * z2,
        }
    )
    return 1j * minus_i_pi


def source(g: GroupoidPoint) -> np.ndarray:
    return np.array([g.z1, g.z2], dtype=complex)


def target(g: GroupoidPoint) -> np.ndarray:
    return np.array([g.z1 * np.exp(g.xi2 * g.z2), g.z2 * np.exp(-g.xi1 * g.z1)], dtype=complex)


def unit(z) -> GroupoidPoint:
    return GroupoidPoint(complex(z[0]), complex(z[1]), 0j, 0j)


def compose(h: GroupoidPoint, g: GroupoidPoint) -> GroupoidPoint:
    """h o g, defined when s(h) = t(g)."""
    tg = target(g)
    if np.max(np.abs(source(h) - tg)) > COMPOSE_TOL * max(1.0, float(np.max(np.abs(tg)))):
        raise ComposabilityError("s(h) differs from t(g)")
    e2 = np.exp(g.xi2 * g.z2)
    e1 = np.exp(-g.xi1 * g.z1)
    return GroupoidPoint(g.z1, g.z2, g.xi1 + h.xi1 * e2, g.xi2 + h.xi2 * e1)


def darboux(g: GroupoidPoint) -> DarbouxPoint:
    z1, z2, x1, x2 = g.as_array()
    a = np.exp(x2 * z2 / 2.0)
    b = np.exp(x1 * z1 / 2.0)
    return DarbouxPoint(z1 * a, z2 / b, x1 / a, x2 * b)


def source_darboux(d: DarbouxPoint) -> np.ndarray:
    return np.array([d.q1 * np.exp(-d.p2 * d.q2 / 2.0), d.q2 * np.exp(d.p1 * d.q1 / 2.0)])


def target_darboux(d: DarbouxPoint) -> np.ndarray:
    return np.array([d.q1 * np.exp(d.p2 * d.q2 / 2.0), d.q2 * np.exp(-d.p1 * d.q1 / 2.0)])


# -- holomorphic Jacobians ----------------------------------------------------


def jac_source(g: GroupoidPoint) -> np.ndarray:
    j = np.zeros((2, 4), dtype=complex)
    j[0, Z1] = j[1, Z2] = 1.0
    return j


def jac_target(g: GroupoidPoint) -> np.ndarray:
    z1, z2, x1, x2 = g.as_array()
    e2 = np.exp(x2 * z2)
    e1 = np.exp(-x1 * z1)
    j = np.zeros((2, 4), dtype=complex)
    j[0, Z1] = e2
    j[0, Z2] = z1 * x2 * e2
    j[0, X2] = z1 * z2 * e2
    j[1, Z2] = e1
    j[1, Z1] = -z2 * x1 * e1
    j[1, X1] = -z2 * z1 * e1
    return j


def jac_darboux(g: GroupoidPoint) -> np.ndarray:
    z1, z2, x1, x2 = g.as_array()
    a = np.exp(x2 * z2 / 2.0)
    b = np.exp(-x1 * z1 / 2.0)
    j = np.zeros((4, 4), dtype=complex)
    # q1 = z1 a
    j[0, Z1] = a
    j[0, Z2] = z1 * a * x2 / 2.0
    j[0, X2] = z1 * a * z2 / 2.0
    # q2 = z2 b
    j[1, Z2] = b
    j[1, Z1] = -z2 * b * x1 / 2.0
    j[1, X1] = -z2 * b * z1 / 2.0
    # p1 = xi1 / a
    j[2, X1] = 1.0 / a
    j[2, Z2] = -x1 / a * x2 / 2.0
    j[2, X2] = -x1 / a * z2 / 2.0
    # p2 = xi2 / b
    j[3, X2] = 1.0 / b
    j[3, Z1] = x2 / b * x1 / 2.0
    j[3, X1] = x2 / b * z1 / 2.0
    return j


def fd_jacobian(fn, x, h: float = 1e-6) -> np.ndarray:
    """Central-difference holomorphic Jacobian, stepping along the real axis
    of each complex coordinate.  Used as an oracle for the analytic ones."""
    x = np.asarray(x, dtype=complex)
    cols = []
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h
        cols.append((np.asarray(fn(x + e)) - np.asarray(fn(x - e))) / (2.0 * h))
    jac = np.stack(cols, axis=-1)
    if not np.all(np.isfinite(jac)):
        raise JacobianError("non-finite finite-difference Jacobian")
    return jac


# -- structural checks --------------------------------------------------------


def canonical_form() -> np.ndarray:
    """dq1 ^ dp1 + dq2 ^ dp2 in the order (q1, q2, p1, p2)."""
    return _antisym({(0, 2): 1.0, (1, 3): 1.0})


def sigma_z(z) -> np.ndarray:
    """The toric invariant holomorphic Poisson tensor at ``z`` as a 2x2 matrix."""
    s = 1j * z[0] * z[1]
    return np.array([[0.0, s], [-s, 0.0]], dtype=complex)


def inverse_residual(g: GroupoidPoint) -> float:
    return float(np.max(np.abs(omega0(g) @ pi_bivector(g) - np.eye(4))))


def darboux_residual(g: GroupoidPoint) -> float:
    """|D^T (dq ^ dp) D - i Omega_0|: the Darboux chart pulls back the canonical form."""
    d = jac_darboux(g)
    return float(np.max(np.abs(d.T @ canonical_form() @ d - 1j * omega0(g))))


def orthogonality_residual(g: GroupoidPoint) -> float:
    """max |{t^a, s^b}_Pi| over the coordinate functions."""
    return float(np.max(np.abs(jac_target(g) @ pi_bivector(g) @ jac_source(g).T)))


def pushforward_residuals(g: GroupoidPoint) -> tuple[float, float]:
    """(|s_* Pi + sigma(s(g))|, |t_* Pi - sigma(t(g))|)."""
    p = pi_bivector(g)
    js, jt = jac_source(g), jac_target(g)
    rs = np.max(np.abs(js @ p @ js.T + sigma_z(source(g))))
    rt = np.max(np.abs(jt @ p @ jt.T - sigma_z(target(g))))
    return float(rs), float(rt)


def kernel_orthogonality_residual(g: GroupoidPoint) -> float:
    """max |Omega_0(u, v)| for u in ker s_*, v in ker t_*."""
    ker_s = np.eye(4, dtype=complex)[:, [X1, X2]]
    _, _, vh = np.linalg.svd(jac_target(g))
    ker_t = vh[2:].conj().T
    return float(np.max(np.abs(ker_s.T @ omega0(g) @ ker_t)))


def target_pushforward_check(g: GroupoidPoint) -> dict[str, float]:
    rs, rt = pushforward_residuals(g)
    return {
        "s_push_minus_sigma": rs,
        "t_push_sigma": rt,
        "kernel_orthogonality": kernel_orthogonality_residual(g),
        "bracket_t_s": orthogonality_residual(g),
    }


# -- the local model on C^2 ---------------------------------------------------


def toy_omega(x, y, u, v) -> np.ndarray:
    """The symplectic form integrating x*y d_x ^ d_y, order (x, y, u, v)."""
    return _antisym(
        {
            (0, 1): u * v,
            (0, 2): v * y,
            (0, 3): -1.0,
            (1, 2): 1.0,
            (1, 3): -u * x,
            (2, 3): -x * y,
        }
    )


def toy_minus_inverse(x, y, u, v) -> np.ndarray:
    """-Omega^{-1} as stated in closed form, order (x, y, u, v)."""
    return _antisym(
        {
            (2, 1): -1.0,
            (2, 3): -u * v,
            (3, 1): -v * y,
            (3, 0): 1.0,
            (2, 0): u * x,
            (0, 1): x * y,
        }
    )


def toy_det(x, y, u, v) -> complex:
    return complex(np.linalg.det(toy_omega(x, y, u, v)))


# -- change of corner chart ---------------------------------------------------


def transport(g: GroupoidPoint, A: np.ndarray) -> GroupoidPoint:
    """Express ``g`` in the neighbouring corner chart with transition matrix A.

    Base coordinates change by the monomial map; the products ``z^a xi_a``
    change linearly, ``w = A^T w~``.
    """
    z = source(g)
    zt = monomial(z, A)
    w = z * np.array([g.xi1, g.xi2])
    wt = np.linalg.solve(np.asarray(A, dtype=float).T, w)
    return GroupoidPoint.from_array(np.concatenate([zt, wt / zt]))


def transport_residuals(g: GroupoidPoint, A: np.ndarray) -> dict[str, float]:
    """Consistency of s, t and Omega_0 with the chart change."""
    gt = transport(g, A)
    r_t = np.max(np.abs(target(gt) - monomial(target(g), A)))
    r_s = np.max(np.abs(source(gt) - monomial(source(g), A)))
    phi = fd_jacobian(lambda x: transport(GroupoidPoint.from_array(x), A).as_array(), g.as_array())
    r_omega = np.max(np.abs(phi.T @ omega0(gt) @ phi - omega0(g)))
    return {"source": float(r_s), "target": float(r_t), "omega0": float(r_omega)}
