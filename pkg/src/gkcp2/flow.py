"""Hitchin flow on the moment triangle of CP^2.

The flow is ``dy1/dt = y1 (y2 - y3)`` and cyclic, preserving
``y1 + y2 + y3 = 1`` and ``c3 = y1 y2 y3``.  Along a level set of ``c3`` the
solution is

    y^k(s) = c3 / (1/12 - wp(omega2 + (omega1/pi) (s + 2 pi k / 3)))

with ``s`` the rescaled, 2*pi periodic flow time; ``(c3, s)`` serves as a
polar chart of the triangle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import elliptic as ell
from .errors import ConvergenceError, DomainError, StepSizeError

TWO_PI = 2.0 * math.pi
_SHIFTS = np.array([2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0, 2.0 * math.pi])


@dataclass(frozen=True)
class PolarPoint:
    c3: float
    s: float

    def __post_init__(self):
        object.__setattr__(self, "s", float(math.fmod(self.s, TWO_PI)) % TWO_PI)

    @property
    def lattice(self) -> ell.LatticeData:
        return ell.lattice(self.c3)


@dataclass(frozen=True)
class TriplePoint:
    y1: float
    y2: float
    y3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.y1, self.y2, self.y3])

    @property
    def c3(self) -> float:
        return self.y1 * self.y2 * self.y3


def _lat(c3: float) -> ell.LatticeData:
    try:
        return ell.lattice(float(c3))
    except DomainError:
        raise
    except ValueError as exc:  # pragma: no cover - defensive
        raise DomainError(str(exc)) from exc


def y_array(c3: float, s) -> np.ndarray:
    """y^1, y^2, y^3 along the contour ``c3`` at rescaled times ``s``.

    Returns an array of shape ``s.shape + (3,)``.
    """
    lat = _lat(c3)
    s = np.asarray(s, dtype=float)
    arg = lat.omega2 + (lat.omega1 / math.pi) * (s[..., None] + _SHIFTS)
    val = c3 / (1.0 / 12.0 - ell.wp(arg, lat))
    return np.real(val)


def dy_ds_array(c3: float, s) -> np.ndarray:
    """Analytic s-derivative of ``y_array`` through wp'."""
    lat = _lat(c3)
    s = np.asarray(s, dtype=float)
    arg = lat.omega2 + (lat.omega1 / math.pi) * (s[..., None] + _SHIFTS)
    den = 1.0 / 12.0 - ell.wp(arg, lat)
    return np.real(c3 * ell.wp_prime(arg, lat) / den**2) * lat.omega1 / math.pi


def y_of_polar(p: PolarPoint) -> TriplePoint:
    y = y_array(p.c3, p.s)
    return TriplePoint(*map(float, y))


def y_via_zeta_array(c3: float, s) -> np.ndarray:
    """The same triple written through Weierstrass zeta only."""
    lat = _lat(c3)
    s = np.asarray(s, dtype=float)
    t = lat.omega2 + lat.omega1 * s / math.pi
    tf = lat.tau_f
    z = lambda w: ell.zeta_w(w, lat)  # noqa: E731
    ztf = z(tf)
    y3 = z(t - tf) - z(t + tf) + 2.0 * ztf
    y1 = z(t) - z(t - tf) + 0.5 - ztf
    y2 = z(t + tf) - z(t) + 0.5 - ztf
    return np.real(np.stack([y1, y2, y3], axis=-1))


def y_via_zeta(p: PolarPoint) -> TriplePoint:
    return TriplePoint(*map(float, y_via_zeta_array(p.c3, p.s)))


def dy_dc3_array(c3: float, s) -> np.ndarray:
    """c3-derivative of the triple at fixed s, in closed form."""
    lat = _lat(c3)
    s = np.asarray(s, dtype=float)
    y = y_array(c3, s)
    yn = np.roll(y, -1, axis=-1)  # y^{i+1}
    ynn = np.roll(y, -2, axis=-1)  # y^{i+2}
    # varsigma(s + (i-3) 2pi/3) for i = 1, 2, 3
    offs = np.array([-4.0, -2.0, 0.0]) * math.pi / 3.0
    vs = ell.varsigma(s[..., None] + offs, lat)
    num = 0.5 * (y * y - y) - 9.0 * c3 * y + 6.0 * c3 + 3.0 * y * (yn - ynn) * vs
    return num / (c3 * (1.0 - 27.0 * c3))


def dy_dc3(p: PolarPoint) -> np.ndarray:
    return dy_dc3_array(p.c3, p.s)


def jacobian_polar(c3: float, s: float) -> np.ndarray:
    """d(y1, y2)/d(c3, s) as a 2x2 matrix (rows y1, y2; columns c3, s)."""
    dc = dy_dc3_array(c3, s)
    ds = dy_ds_array(c3, s)
    return np.array([[dc[0], ds[0]], [dc[1], ds[1]]])


def _angle(y1, y2):
    return np.arctan2(y2 - 1.0 / 3.0, y1 - 1.0 / 3.0)


def polar_of_y(y1: float, y2: float, *, max_iter: int = 50, tol: float = 1e-14) -> PolarPoint:
    """Invert the polar chart.

    ``c3`` is read off directly; ``s`` solves a monotone angle equation by
    Newton's method seeded from a 64 point scan of the contour.
    """
    y3 = 1.0 - y1 - y2
    if min(y1, y2, y3) <= 0.0:
        raise DomainError("point outside the open triangle")
    c3 = float(y1 * y2 * y3)
    target = _angle(y1, y2)
    grid = np.linspace(0.0, TWO_PI, 64, endpoint=False)
    ys = y_array(c3, grid)
    diff = np.angle(np.exp(1j * (_angle(ys[:, 0], ys[:, 1]) - target)))
    s = float(grid[np.argmin(np.abs(diff))])
    prev = math.inf
    for _ in range(max_iter):
        y = y_array(c3, s)
        dy = dy_ds_array(c3, s)
        a, b = y[0] - 1.0 / 3.0, y[1] - 1.0 / 3.0
        f = math.remainder(math.atan2(b, a) - target, TWO_PI)
        df = (a * dy[1] - b * dy[0]) / (a * a + b * b)
        step = f / df
        s -= step
        # below ~1e-10 the step stops shrinking once it hits the rounding floor of the angle
        if abs(step) < tol or (abs(step) < 1e-10 and abs(step) >= 0.5 * prev):
            return PolarPoint(c3, s)
        prev = abs(step)
    raise ConvergenceError("polar_of_y: Newton iteration on s did not converge")


def flow_map(p: PolarPoint, dt: float) -> PolarPoint:
    """Time-``dt`` flow: a shift of s by pi*dt/omega1(c3)."""
    lat = _lat(p.c3)
    return PolarPoint(p.c3, p.s + math.pi * dt / lat.omega1)


def flow_rhs(_t, y):
    y1, y2, y3 = y
    return [y1 * (y2 - y3), y2 * (y3 - y1), y3 * (y1 - y2)]


def ode_oracle(y0: TriplePoint, dt: float, *, rtol: float = 1e-13, atol: float = 1e-15) -> TriplePoint:
    """Integrate the flow ODE directly with an adaptive Runge-Kutta method."""
    if dt == 0.0:
        return y0
    sol = solve_ivp(flow_rhs, (0.0, dt), y0.as_array(), method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise StepSizeError(sol.message)
    return TriplePoint(*map(float, sol.y[:, -1]))


def flow_residual(c3: float, s) -> np.ndarray:
    """Pointwise residual of the flow ODE for the closed-form solution."""
    lat = _lat(c3)
    y = y_array(c3, s)
    dyt = dy_ds_array(c3, s) * math.pi / lat.omega1
    rhs = y * (np.roll(y, -1, axis=-1) - np.roll(y, -2, axis=-1))
    return dyt - rhs
