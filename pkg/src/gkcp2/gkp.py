"""Generalised Kähler potential on CP^2.

    K(c3, s, dt) = (dt/4) log c3 + (3/8) int_0^dt sum_i y^i_t log(y^i_t / y^i_0) dt'

with ``y_t = y(c3, s + pi t'/omega1)``.  The first term is a multiple of the
Fubini-Study potential; the integral has no known closed form and is
evaluated by Gauss-Legendre quadrature with order doubling.  ``K`` is only
defined up to local constants and is normalised by ``K(dt=0) = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, QuadratureError
from .flow import PolarPoint, y_array

QUAD_TOL = 1e-10
MAX_ROUNDS = 12


@dataclass(frozen=True)
class GkpValue:
    point: PolarPoint
    dt: float
    K: float
    fubini_study_part: float
    correction_part: float
    quad_order: int = 0


def _integrand(c3: float, s: float, omega1: float):
    y0 = y_array(c3, s)

    def f(t):
        yt = y_array(c3, s + math.pi * np.asarray(t) / omega1)
        return np.sum(yt * np.log(yt / y0), axis=-1)

    return f


def gauss_legendre(f, a: float, b: float, n: int) -> float:
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return float(half * np.sum(w * f(0.5 * (a + b) + half * x)))


def integrate_doubling(f, a: float, b: float, order: int, tol: float = QUAD_TOL) -> tuple[float, int]:
    """Gauss-Legendre at ``order, 2*order, ...`` until two successive values agree."""
    prev = gauss_legendre(f, a, b, order)
    for _ in range(MAX_ROUNDS):
        order *= 2
        cur = gauss_legendre(f, a, b, order)
        if abs(cur - prev) < tol:
            return cur, order
        prev = cur
    raise QuadratureError(f"no convergence after {MAX_ROUNDS} doublings (order {order})")


def potential(p: PolarPoint, dt: float, quad_order: int = 16) -> GkpValue:
    if dt < 0.0:
        raise DomainError("flow time must be non-negative")
    if quad_order < 8:
        raise DomainError("quadrature order must be at least 8")
    fs = 0.25 * dt * math.log(p.c3)
    if dt == 0.0:
        return GkpValue(p, 0.0, 0.0, 0.0, 0.0, 0)
    f = _integrand(p.c3, p.s, p.lattice.omega1)
    integral, order = integrate_doubling(f, 0.0, dt, quad_order)
    corr = 0.375 * integral
    return GkpValue(p, float(dt), fs + corr, fs, corr, order)


def correction_u_form(p: PolarPoint, dt: float, quad_order: int = 16) -> float:
    """The same correction in the rescaled time u = pi t / omega1."""
    w1 = p.lattice.omega1
    y0 = y_array(p.c3, p.s)

    def f(u):
        yu = y_array(p.c3, p.s + np.asarray(u))
        return np.sum(yu * np.log(yu / y0), axis=-1)

    val, _ = integrate_doubling(f, 0.0, dt * math.pi / w1, quad_order)
    return 3.0 * w1 / (8.0 * math.pi) * val


def correction_trapezoid(p: PolarPoint, dt: float, panels: int = 100_000) -> float:
    """Composite trapezoid rule, an independent oracle for the quadrature."""
    t = np.linspace(0.0, dt, panels + 1)
    f = _integrand(p.c3, p.s, p.lattice.omega1)(t)
    return 0.375 * float(np.trapezoid(f, t))


def slope_at_zero(p: PolarPoint, h: float = 1e-4) -> float:
    """One-sided second-order difference of K in dt at dt = 0."""
    k1 = potential(p, h).K
    k2 = potential(p, 2.0 * h).K
    return (4.0 * k1 - k2) / (2.0 * h)


def local_Q_coords(p: PolarPoint, dt: float, theta) -> np.ndarray:
    """Holomorphic coordinates adapted to the flowed structure.

    ``(Q^a)^2 = z^a zhat^a`` with ``z`` the inhomogeneous coordinates at the
    start and ``zhat`` at the end of the flow, both of phase ``theta_a``.  Since
    ``|z^a|^2 = y^a/y^3`` this gives ``|Q^a|^4 = y0^a yt^a / (y0^3 yt^3)``.
    """
    w1 = p.lattice.omega1
    y0 = y_array(p.c3, p.s)
    yt = y_array(p.c3, p.s + math.pi * dt / w1)
    mod = (y0[:2] * yt[:2] / (y0[2] * yt[2])) ** 0.25
    return mod * np.exp(1j * np.asarray(theta, dtype=float))


@dataclass(frozen=True)
class RegularityReport:
    c3: tuple[float, ...]
    correction: tuple[float, ...]
    fubini_study: tuple[float, ...]
    min_ratio: float
    max_ratio: float
    bounded: bool


def correction_regularity_check(
    c3_values, s: float, dt: float, bound: float | None = None, samples: int = 257
) -> RegularityReport:
    """Follow points towards the boundary of the triangle at fixed s and dt.

    The correction must stay below ``bound`` (default ``dt``: the integrand
    is a sum of ``y log(y_t/y_0)`` terms which is at most of order one) while
    the Fubini-Study part grows like ``log c3``.
    """
    bound = abs(dt) if bound is None else bound
    corr, fs, lo, hi = [], [], math.inf, 0.0
    for c3 in c3_values:
        p = PolarPoint(float(c3), s)
        v = potential(p, dt)
        corr.append(v.correction_part)
        fs.append(v.fubini_study_part)
        t = np.linspace(0.0, dt, samples)
        y0 = y_array(p.c3, p.s)
        yt = y_array(p.c3, p.s + math.pi * t / p.lattice.omega1)
        r = yt / y0
        lo, hi = min(lo, float(r.min())), max(hi, float(r.max()))
    ok = all(abs(c) <= bound for c in corr) and all(math.isfinite(x) for x in corr)
    return RegularityReport(tuple(map(float, c3_values)), tuple(corr), tuple(fs), lo, hi, ok)
