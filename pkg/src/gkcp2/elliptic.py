"""Weierstrass functions for the one-parameter rectangular lattice family.

The cubic invariants are fixed by a single real parameter ``c3`` in
``(0, 1/27)``::

    g2 = 1/12 - 2*c3
    g3 = c3/6 - 1/216 - c3**2

For every such ``c3`` the discriminant is positive, the three roots
``e1 > e3 > e2`` of ``4x^3 - g2 x - g3`` are real and the period lattice is
rectangular: ``omega1`` is real and ``omega2`` purely imaginary.

Periods come from the arithmetic-geometric mean of root differences.  The
functions themselves are evaluated through the Jacobi theta series of
``theta_1`` at the nome ``q = exp(i*pi*tau)``; when ``|omega2| < omega1`` the
lattice is rotated by a quarter turn first so that ``q <= exp(-pi)`` always.

All evaluators accept scalars or numpy arrays of complex arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError

C3_MAX = 1.0 / 27.0
DEFAULT_GUARD = (1e-6, C3_MAX - 1e-6)
POLE_THRESHOLD = 1e-8

_N_THETA = 10


@dataclass(frozen=True)
class CubicInvariants:
    c3: float
    g2: float
    g3: float
    discriminant: float


def invariants_from_c3(c3: float, guard: tuple[float, float] | None = DEFAULT_GUARD) -> CubicInvariants:
    """Cubic invariants of the lattice labelled by ``c3``.

    ``guard`` is the closed interval of admissible ``c3``; pass ``None`` to
    accept anything in the open interval ``(0, 1/27)``.
    """
    c3 = float(c3)
    lo, hi = guard if guard is not None else (0.0, C3_MAX)
    inside = lo <= c3 <= hi if guard is not None else 0.0 < c3 < C3_MAX
    if not inside or not 0.0 < c3 < C3_MAX:
        raise DomainError(f"c3={c3!r} outside the admissible interval [{lo}, {hi}]")
    g2 = 1.0 / 12.0 - 2.0 * c3
    g3 = c3 / 6.0 - 1.0 / 216.0 - c3 * c3
    # the factored form is more accurate than g2**3 - 27*g3**2
    disc = c3**3 * (1.0 - 27.0 * c3)
    return CubicInvariants(c3, g2, g3, disc)


def agm(a: float, b: float, tol: float = 4e-16) -> float:
    """Arithmetic-geometric mean of two positive reals."""
    if a <= 0.0 or b <= 0.0:
        raise DomainError("agm needs positive arguments")
    for _ in range(64):
        if abs(a - b) <= tol * a:
            return 0.5 * (a + b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    raise ConvergenceError("agm did not converge")


def _turning_points(c3: float) -> tuple[float, float, float]:
    """Roots y_s < y_m < y_b of y(1-y)^2 = 4*c3, Newton polished."""
    # y^3 - 2y^2 + y - 4c3, depressed by y = x + 2/3
    p = -1.0 / 3.0
    q = 2.0 / 27.0 - 4.0 * c3
    r = 2.0 * math.sqrt(-p / 3.0)
    arg = 3.0 * q / (2.0 * p) * math.sqrt(-3.0 / p)
    phi = math.acos(max(-1.0, min(1.0, arg))) / 3.0
    ys = []
    for k in range(3):
        y = 2.0 / 3.0 + r * math.cos(phi - 2.0 * math.pi * k / 3.0)
        for _ in range(20):
            f = y * (1.0 - y) ** 2 - 4.0 * c3
            df = (1.0 - y) * (1.0 - 3.0 * y)
            if df == 0.0:
                break
            step = f / df
            y -= step
            if abs(step) <= 1e-17 * abs(y):
                break
        ys.append(y)
    return tuple(sorted(ys))


def _cubic_roots(c3: float) -> tuple[tuple[float, float, float], tuple[float, float, float]]:
    """Roots (e1, e2, e3) of the Weierstrass cubic with e1 > e3 > e2, and the
    differences (e1 - e2, e1 - e3, e3 - e2) to full relative precision.

    Each root is 1/12 - c3/y at a turning point y of the flow.  Two of the
    y's merge at either end of the c3 interval; their gap is recovered from
    the discriminant 16*c3*(1 - 27*c3) of the y-cubic instead of subtracting.
    """
    ys, ym, yb = _turning_points(c3)
    gaps = {"bm": yb - ym, "ms": ym - ys, "bs": yb - ys}
    close = min(("bm", "ms"), key=lambda k: gaps[k])
    other = gaps["ms" if close == "bm" else "bm"]
    gaps[close] = 4.0 * math.sqrt(c3 * (1.0 - 27.0 * c3)) / (other * gaps["bs"])
    e1 = 1.0 / 12.0 - c3 / yb
    e3 = 1.0 / 12.0 - c3 / ym
    e2 = 1.0 / 12.0 - c3 / ys
    d12 = c3 * gaps["bs"] / (yb * ys)
    d13 = c3 * gaps["bm"] / (yb * ym)
    d32 = c3 * gaps["ms"] / (ym * ys)
    return (e1, e2, e3), (d12, d13, d32)


class _ThetaCell:
    """Theta-series evaluator for a rectangular lattice with half-periods
    ``w1`` (real) and ``1j*w2`` (imaginary), ``w2 >= w1``."""

    def __init__(self, w1: float, w2: float):
        self.w1 = float(w1)
        self.w2 = float(w2)
        self.log_q = -math.pi * self.w2 / self.w1
        n = np.arange(_N_THETA)
        self._odd = 2.0 * n + 1.0
        self._sign = np.where(n % 2 == 0, 1.0, -1.0)
        self._logw = self.log_q * (n + 0.5) ** 2
        w = np.exp(self._logw)
        self.theta1p0 = 2.0 * np.sum(self._sign * self._odd * w)
        theta1ppp0 = -2.0 * np.sum(self._sign * self._odd**3 * w)
        self.eta1 = -(math.pi**2) * theta1ppp0 / (12.0 * self.w1 * self.theta1p0)
        self.omega2 = 1j * self.w2
        # Legendre relation eta1*omega2 - eta2*omega1 = i*pi/2
        self.eta2 = (self.eta1 * self.omega2 - 0.5j * math.pi) / self.w1
        self.scale = math.pi / (2.0 * self.w1)

    def _theta1(self, v: np.ndarray, kmax: int) -> list[np.ndarray]:
        """theta_1 and its first ``kmax`` v-derivatives."""
        v = v[..., None]
        ep = np.exp(self._logw + 1j * self._odd * v)
        em = np.exp(self._logw - 1j * self._odd * v)
        out = []
        for k in range(kmax + 1):
            # d^k/dv^k sin(o v) = o^k sin(o v + k pi/2)
            term = (1j**k * ep - (-1j) ** k * em) / 2j
            out.append(2.0 * np.sum(self._sign * self._odd**k * term, axis=-1))
        return out

    def reduce(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        m = np.round(z.real / (2.0 * self.w1))
        n = np.round(z.imag / (2.0 * self.w2))
        z0 = z - 2.0 * m * self.w1 - 2.0j * n * self.w2
        return z0, m, n

    def _check_pole(self, z0: np.ndarray) -> None:
        if np.any(np.abs(z0) < POLE_THRESHOLD * self.w1):
            raise PoleError("argument on the period lattice")

    def wp(self, z):
        z0, _, _ = self.reduce(z)
        self._check_pole(z0)
        t0, t1, t2 = self._theta1(self.scale * z0, 2)
        l1 = t1 / t0
        return -self.eta1 / self.w1 + self.scale**2 * (l1 * l1 - t2 / t0)

    def wp_prime(self, z):
        z0, _, _ = self.reduce(z)
        self._check_pole(z0)
        t0, t1, t2, t3 = self._theta1(self.scale * z0, 3)
        l1 = t1 / t0
        d3 = t3 / t0 - 3.0 * t2 * l1 / t0 + 2.0 * l1**3
        return -self.scale**3 * d3

    def zeta(self, z):
        z0, m, n = self.reduce(z)
        self._check_pole(z0)
        t0, t1 = self._theta1(self.scale * z0, 1)
        base = self.eta1 * z0 / self.w1 + self.scale * t1 / t0
        return base + 2.0 * m * self.eta1 + 2.0 * n * self.eta2

    def _quasi_log(self, z0, m, n):
        shift = 2.0 * m * self.eta1 + 2.0 * n * self.eta2
        parity = np.mod(m + n + m * n, 2.0)
        return shift * (z0 + m * self.w1 + n * self.omega2) + 1j * math.pi * parity

    def log_sigma(self, z):
        z0, m, n = self.reduce(z)
        self._check_pole(z0)
        (t0,) = self._theta1(self.scale * z0, 0)
        base = (
            math.log(2.0 * self.w1 / math.pi)
            + self.eta1 * z0**2 / (2.0 * self.w1)
            + np.log(t0)
            - math.log(self.theta1p0)
        )
        return base + self._quasi_log(z0, m, n)

    def sigma(self, z):
        z0, m, n = self.reduce(z)
        (t0,) = self._theta1(self.scale * z0, 0)
        base = (2.0 * self.w1 / math.pi) * np.exp(self.eta1 * z0**2 / (2.0 * self.w1)) * t0 / self.theta1p0
        return base * np.exp(self._quasi_log(z0, m, n))


@dataclass(frozen=True)
class LatticeData:
    """Periods, quasi-periods and roots for one value of ``c3``.

    ``omega2``, ``eta2`` and ``tilde_eta2`` are purely imaginary and are kept
    as Python complex numbers; the remaining quantities are real.
    """

    c3: float
    g2: float
    g3: float
    discriminant: float
    omega1: float
    omega2: complex
    eta1: float
    eta2: complex
    e1: float
    e2: float
    e3: float
    tilde_eta1: float
    tilde_eta2: complex
    j_invariant: float
    rotated: bool = False
    _cell: _ThetaCell = field(default=None, repr=False, compare=False)

    @property
    def tau_f(self) -> float:
        """The tertiary period 2*omega1/3 where wp equals 1/12."""
        return 2.0 * self.omega1 / 3.0

    @property
    def nome(self) -> float:
        return math.exp(-math.pi * self.omega2.imag / self.omega1)

    def legendre_residual(self) -> float:
        return abs(self.eta1 * self.omega2 - self.eta2 * self.omega1 - 0.5j * math.pi)


def lattice_from_invariants(inv: CubicInvariants) -> LatticeData:
    (e1, e2, e3), (d12, d13, d32) = _cubic_roots(inv.c3)
    if not (e1 > e3 > e2 and d13 > 0.0 and d32 > 0.0):
        raise ConvergenceError(f"root ordering failed at c3={inv.c3}")
    omega1 = math.pi / (2.0 * agm(math.sqrt(d12), math.sqrt(d13)))
    w2 = math.pi / (2.0 * agm(math.sqrt(d12), math.sqrt(d32)))
    rotated = w2 < omega1
    if not rotated:
        cell = _ThetaCell(omega1, w2)
        eta1 = float(cell.eta1)
        eta2 = complex(cell.eta2)
    else:
        # cell describes the lattice -i*Lambda: real half-period w2, imaginary omega1
        cell = _ThetaCell(w2, omega1)
        eta1 = float((1j * cell.eta2).real)
        eta2 = complex(-1j * cell.eta1)
    omega2 = 1j * w2
    shift = 1.0 / 12.0 - 3.0 * inv.c3
    return LatticeData(
        c3=inv.c3,
        g2=inv.g2,
        g3=inv.g3,
        discriminant=inv.discriminant,
        omega1=omega1,
        omega2=omega2,
        eta1=eta1,
        eta2=eta2,
        e1=e1,
        e2=e2,
        e3=e3,
        tilde_eta1=eta1 + omega1 * shift,
        tilde_eta2=eta2 + omega2 * shift,
        j_invariant=1728.0 * inv.g2**3 / inv.discriminant,
        rotated=rotated,
        _cell=cell,
    )


@lru_cache(maxsize=4096)
def lattice(c3: float, guard: tuple[float, float] | None = DEFAULT_GUARD) -> LatticeData:
    """Cached ``lattice_from_invariants(invariants_from_c3(c3, guard))``."""
    return lattice_from_invariants(invariants_from_c3(c3, guard))


def _as_complex(z):
    return np.asarray(z, dtype=complex)


def _out(x):
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


def wp(z, lat: LatticeData):
    z = _as_complex(z)
    if lat.rotated:
        return _out(-lat._cell.wp(-1j * z))
    return _out(lat._cell.wp(z))


def wp_prime(z, lat: LatticeData):
    z = _as_complex(z)
    if lat.rotated:
        return _out(1j * lat._cell.wp_prime(-1j * z))
    return _out(lat._cell.wp_prime(z))


def zeta_w(z, lat: LatticeData):
    z = _as_complex(z)
    if lat.rotated:
        return _out(-1j * lat._cell.zeta(-1j * z))
    return _out(lat._cell.zeta(z))


def log_sigma_w(z, lat: LatticeData):
    """A branch of log(sigma(z)); the real part is branch independent."""
    z = _as_complex(z)
    if lat.rotated:
        return _out(0.5j * math.pi + lat._cell.log_sigma(-1j * z))
    return _out(lat._cell.log_sigma(z))


def sigma_w(z, lat: LatticeData):
    z = _as_complex(z)
    if lat.rotated:
        return _out(1j * lat._cell.sigma(-1j * z))
    return _out(lat._cell.sigma(z))


# -- c3 derivatives at fixed complex argument --------------------------------


def d_c3_wp(z, lat: LatticeData):
    c3 = lat.c3
    z = _as_complex(z)
    p, dp, ze = wp(z, lat), wp_prime(z, lat), zeta_w(z, lat)
    pre = c3**2 / (12.0 * lat.discriminant)
    return pre * (6.0 * p * (1 - 36 * c3) + 3.0 * dp * (12.0 * ze + z - 36.0 * c3 * z) + 72.0 * p * p + 24.0 * c3 - 1.0)


def d_c3_zeta(z, lat: LatticeData):
    c3 = lat.c3
    z = _as_complex(z)
    p, dp, ze = wp(z, lat), wp_prime(z, lat), zeta_w(z, lat)
    pre = -(c3**2) / (48.0 * lat.discriminant)
    return pre * (72.0 * dp + (ze - p * z) * (432.0 * c3 - 12.0) + 144.0 * p * ze + (24.0 * c3 - 1.0) * z)


def d_c3_log_sigma(z, lat: LatticeData):
    c3 = lat.c3
    z = _as_complex(z)
    p, ze = wp(z, lat), zeta_w(z, lat)
    pre = -(c3**2) / (96.0 * lat.discriminant)
    return pre * (144.0 * p + (24.0 * c3 - 1.0) * z * z - 144.0 * ze * ze + (864.0 * c3 - 24.0) * (ze * z - 1.0))


@dataclass(frozen=True)
class PeriodDerivatives:
    d_omega1: float
    d_omega2: complex
    d_eta1: float
    d_eta2: complex
    d_tilde_eta1: float
    d_tilde_eta2: complex


def period_matrix(c3: float) -> np.ndarray:
    """Linear map with d/dc3 (eta_i, omega_i) = M @ (eta_i, omega_i)."""
    a = 1.0 - 36.0 * c3
    m = np.array([[a / 4.0, (1.0 - 24.0 * c3) / 48.0], [-3.0, -a / 4.0]])
    return m / (c3 * (1.0 - 27.0 * c3))


def d_c3_periods(lat: LatticeData) -> PeriodDerivatives:
    m = period_matrix(lat.c3)
    d_eta1, d_omega1 = m @ np.array([lat.eta1, lat.omega1])
    d_eta2, d_omega2 = m @ np.array([lat.eta2, lat.omega2])
    return PeriodDerivatives(
        d_omega1=float(d_omega1),
        d_omega2=complex(d_omega2),
        d_eta1=float(d_eta1),
        d_eta2=complex(d_eta2),
        d_tilde_eta1=-2.0 * lat.omega1,
        d_tilde_eta2=-2.0 * lat.omega2,
    )


# -- special values -----------------------------------------------------------


@dataclass(frozen=True)
class TertiaryValues:
    wp_tf_half: float
    wp_w2_plus_tf: float
    wp_prime_tf_half: float
    wp_prime_w2_plus_tf: float


def tertiary_values(lat: LatticeData) -> TertiaryValues:
    """wp and wp' at tau_f/2 and omega2 + tau_f, evaluated directly."""
    a = lat.tau_f / 2.0
    b = lat.omega2 + lat.tau_f
    return TertiaryValues(
        wp_tf_half=float(np.real(wp(a, lat))),
        wp_w2_plus_tf=float(np.real(wp(b, lat))),
        wp_prime_tf_half=float(np.real(wp_prime(a, lat))),
        wp_prime_w2_plus_tf=float(np.real(wp_prime(b, lat))),
    )


def tertiary_closed_forms(lat: LatticeData) -> TertiaryValues:
    """The same four numbers from their algebraic expressions in c3, e1, e2."""
    c3, e1, e2 = lat.c3, lat.e1, lat.e2
    a = (27 * c3 + 6 * e1 - 72 * c3 * e1 + 72 * e1**2 - 1) / (36 * c3)
    b = (27 * c3 + 6 * e2 - 72 * c3 * e2 + 72 * e2**2 - 1) / (36 * c3)
    return TertiaryValues(
        wp_tf_half=a,
        wp_w2_plus_tf=b,
        wp_prime_tf_half=-(3 * c3 + a - 1.0 / 12.0),
        wp_prime_w2_plus_tf=3 * c3 + b - 1.0 / 12.0,
    )


def tertiary_quartic(x, lat: LatticeData):
    """x^4 - g2 x^2/2 - g3 x - g2^2/48, whose roots are wp(2 omega_i / 3)."""
    return x**4 - 0.5 * lat.g2 * x**2 - lat.g3 * x - lat.g2**2 / 48.0


def varsigma(s, lat: LatticeData, *, check: bool = True):
    """zeta(omega2 + s*omega1/pi) - eta2 - s*eta1/pi, real and 2*pi periodic."""
    s = np.asarray(s, dtype=float)
    val = zeta_w(lat.omega2 + s * lat.omega1 / math.pi, lat) - lat.eta2 - s * lat.eta1 / math.pi
    if check and np.any(np.abs(np.imag(val)) > 1e-9 * (1.0 + np.abs(np.real(val)))):
        raise ConvergenceError("varsigma lost reality")
    return _out(np.real(val))
