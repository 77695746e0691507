"""The generalised Kähler structure on CP^2 in the chart (theta1, theta2, c3, s).

Every tensor is returned as a 4x4 real matrix in the coordinate order
``(theta1, theta2, c3, s)``.  Endomorphisms use ``m[row, col] = I^row_col``,
bivectors ``m[a, b] = Q^{ab}`` and 2-forms or metrics ``m[a, b] = F_ab``.  With
these conventions the defining relations read as plain matrix identities:

    I_plus - I_minus + Q @ F = 0
    I_minus.T @ F + F @ I_plus = 0
    g = I_minus.T @ F - F @ I_minus
    Q = [I_plus, I_minus] @ inv(g)

The sign of ``g`` is the one that makes it positive definite for small
positive flow time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import elliptic as ell
from .errors import DomainError, StencilError
from .flow import PolarPoint, y_array

TH1, TH2, C3, S = range(4)
TWO_PI = 2.0 * math.pi


class Kind(str, Enum):
    I_MINUS = "I_minus"
    I_PLUS = "I_plus"
    Q = "Q"
    F = "F"
    G = "g"
    SIGMA_PLUS_RE = "sigma_plus_re"
    SIGMA_PLUS_IM = "sigma_plus_im"


@dataclass(frozen=True)
class FieldSample:
    point: PolarPoint
    kind: Kind
    m: np.ndarray
    dt: float = 0.0


@dataclass(frozen=True)
class GksReport:
    residual_GKS_I: float
    residual_GKS_II: float
    residual_I2: float
    residual_hermitian_plus: float
    residual_hermitian_minus: float
    min_metric_eigenvalue: float
    nijenhuis_max: float


def _lat(c3: float) -> ell.LatticeData:
    return ell.lattice(float(c3))


def _j_components(c3: float, s: float):
    """The four mixed blocks of the standard complex structure at (c3, s)."""
    lat = _lat(c3)
    s = s % TWO_PI
    y1, y2, _ = y_array(c3, s)
    vs = ell.varsigma(s, lat)
    w1 = lat.omega1
    j_ts = (w1 / (2.0 * math.pi)) * np.array([3.0 * y2 - 1.0, 1.0 - 3.0 * y1])
    pre = 1.0 / (4.0 * c3 * (1.0 - 27.0 * c3))
    j_tc = pre * np.array(
        [
            1.0 + 3.0 * y2 - 18.0 * y1 * y2 - 6.0 * vs * (1.0 - 3.0 * y2),
            1.0 + 3.0 * y1 - 18.0 * y1 * y2 + 6.0 * vs * (1.0 - 3.0 * y1),
        ]
    )
    k = 4.0 * math.pi * c3 / w1
    j_ct = k * np.array([-j_ts[1], j_ts[0]])
    j_st = k * np.array([j_tc[1], -j_tc[0]])
    return j_ts, j_tc, j_ct, j_st


def _assemble(j_ts, j_tc, j_ct, j_st) -> np.ndarray:
    m = np.zeros((4, 4))
    m[:2, C3] = j_tc
    m[:2, S] = j_ts
    m[C3, :2] = j_ct
    m[S, :2] = j_st
    return m


def i_minus_matrix(c3: float, s: float) -> np.ndarray:
    return _assemble(*_j_components(c3, s))


def I_minus(p: PolarPoint) -> FieldSample:
    """The Fubini-Study complex structure in the polar chart."""
    return FieldSample(p, Kind.I_MINUS, i_minus_matrix(p.c3, p.s), 0.0)


def shift_slope(c3: float, dt: float) -> float:
    """d/dc3 of the flow shift pi*dt/omega1(c3), through d omega1/dc3."""
    lat = _lat(c3)
    return 3.0 * lat.tilde_eta1 * math.pi * dt / (lat.omega1**2 * c3 * (1.0 - 27.0 * c3))


def flow_pushforward(c3: float, dt: float) -> np.ndarray:
    """Jacobian of (theta, c3, s) -> (theta, c3, s + pi*dt/omega1(c3))."""
    d = np.eye(4)
    d[S, C3] = shift_slope(c3, dt)
    return d


def i_plus_matrix(c3: float, s: float, dt: float) -> np.ndarray:
    """I_- at the flowed point, with the c3-dependence of the shift restored."""
    lat = _lat(c3)
    s1 = s + math.pi * dt / lat.omega1
    j_ts, j_tc, j_ct, j_st = _j_components(c3, s1)
    kappa = shift_slope(c3, dt)
    return _assemble(j_ts, j_tc + kappa * j_ts, j_ct, j_st - kappa * j_ct)


def I_plus(p: PolarPoint, dt: float) -> FieldSample:
    return FieldSample(p, Kind.I_PLUS, i_plus_matrix(p.c3, p.s, dt), float(dt))


def q_matrix(c3: float) -> np.ndarray:
    lat = _lat(c3)
    q = np.zeros((4, 4))
    a = 4.0 * c3 * math.pi / lat.omega1
    q[C3, S], q[S, C3] = a, -a
    q[TH1, TH2], q[TH2, TH1] = -1.0, 1.0
    return q


def Q_polar(p: PolarPoint) -> FieldSample:
    """Hitchin's Poisson bivector, preserved by the flow."""
    return FieldSample(p, Kind.Q, q_matrix(p.c3), 0.0)


# -- the 2-form F -------------------------------------------------------------


def _y_integrals(c3: float, s: float, dt: float):
    """Y^i = int_0^dt y^i along the flow, and their (c3, s) derivatives.

    Returns ``(Y, dY)`` with ``Y`` of shape (2,) and ``dY[i] = (d_c3, d_s)``.
    Only real parts of the log-sigma sums are used, which are branch free.
    """
    lat = _lat(c3)
    s = s % TWO_PI
    per = ell.d_c3_periods(lat)
    t = lat.omega2 + lat.omega1 * s / math.pi
    dT = per.d_omega2 + per.d_omega1 * s / math.pi
    tf = lat.tau_f
    dtf = 2.0 * per.d_omega1 / 3.0
    const = 0.5 - (1.0 / 6.0 + 2.0 * lat.eta1 / 3.0)
    dconst = -2.0 * per.d_eta1 / 3.0

    # (argument, its c3-derivative, sign) for each sigma factor
    terms = (
        ((t + dt, dT, 1.0), (t - tf, dT - dtf, 1.0), (t + dt - tf, dT - dtf, -1.0), (t, dT, -1.0)),
        ((t + dt + tf, dT + dtf, 1.0), (t, dT, 1.0), (t + dt, dT, -1.0), (t + tf, dT + dtf, -1.0)),
    )
    Y = np.zeros(2)
    dY = np.zeros((2, 2))
    for i, group in enumerate(terms):
        u = np.array([g[0] for g in group])
        du = np.array([g[1] for g in group])
        sg = np.array([g[2] for g in group])
        ze = ell.zeta_w(u, lat)
        Y[i] = np.sum(sg * np.real(ell.log_sigma_w(u, lat))) + dt * const
        dY[i, 0] = np.sum(sg * np.real(ell.d_c3_log_sigma(u, lat) + ze * du)) + dt * dconst
        dY[i, 1] = np.sum(sg * np.real(ze)) * lat.omega1 / math.pi
    return Y, dY


def y_integrals(c3: float, s: float, dt: float) -> np.ndarray:
    return _y_integrals(c3, s, dt)[0]


def f_matrix(c3: float, s: float, dt: float) -> np.ndarray:
    """F = -(3/2) sum_i dY^i ^ dtheta_i."""
    if dt == 0.0:
        return np.zeros((4, 4))
    _, dY = _y_integrals(c3, s, dt)
    f = np.zeros((4, 4))
    for i in range(2):
        for b, col in ((C3, 0), (S, 1)):
            f[b, i] = -1.5 * dY[i, col]
            f[i, b] = 1.5 * dY[i, col]
    return f


def F_two_form(p: PolarPoint, dt: float) -> FieldSample:
    return FieldSample(p, Kind.F, f_matrix(p.c3, p.s, dt), float(dt))


def ddc_h_matrix(c3: float, s: float) -> np.ndarray:
    """d(I_-^* dh) = -(3/2) sum_i dy^i ^ dtheta_i for h = -log(y1 y2 y3)/4."""
    from .flow import dy_dc3_array, dy_ds_array

    dc = dy_dc3_array(c3, s)
    ds = dy_ds_array(c3, s)
    f = np.zeros((4, 4))
    for i in range(2):
        for b, d in ((C3, dc[i]), (S, ds[i])):
            f[b, i] = -1.5 * d
            f[i, b] = 1.5 * d
    return f


# -- metric and derived objects -----------------------------------------------


def metric_matrix(c3: float, s: float, dt: float) -> np.ndarray:
    im = i_minus_matrix(c3, s)
    f = f_matrix(c3, s, dt)
    return im.T @ f - f @ im


def metric(p: PolarPoint, dt: float) -> FieldSample:
    return FieldSample(p, Kind.G, metric_matrix(p.c3, p.s, dt), float(dt))


def sigma_pm(p: PolarPoint, dt: float) -> tuple[FieldSample, FieldSample]:
    """Real and imaginary parts of sigma_+ = (I_+ Q + i Q)/4."""
    ip = i_plus_matrix(p.c3, p.s, dt)
    q = q_matrix(p.c3)
    return (
        FieldSample(p, Kind.SIGMA_PLUS_RE, 0.25 * ip @ q, float(dt)),
        FieldSample(p, Kind.SIGMA_PLUS_IM, 0.25 * q, float(dt)),
    )


def sigma_complex(i_mat: np.ndarray, q: np.ndarray) -> np.ndarray:
    return 0.25 * (i_mat @ q + 1j * q)


def type_projection(bivector: np.ndarray, i_mat: np.ndarray, holomorphic: bool) -> np.ndarray:
    """Project a (complex) bivector on both indices onto T^{1,0} or T^{0,1}."""
    sign = -1.0 if holomorphic else 1.0
    p = 0.5 * (np.eye(4) + sign * 1j * i_mat)
    return p @ bivector @ p.T


def one_one_part(bivector: np.ndarray, i_mat: np.ndarray) -> np.ndarray:
    return 0.5 * (bivector + i_mat @ bivector @ i_mat.T)


# -- integrability ------------------------------------------------------------

_STENCIL = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0
_OFFSETS = np.array([-2.0, -1.0, 1.0, 2.0])


def _derivative(fn, c3: float, s: float, axis: int, h: float) -> np.ndarray:
    acc = 0.0
    for w, o in zip(_STENCIL, _OFFSETS):
        acc = acc + w * (fn(c3 + o * h, s) if axis == C3 else fn(c3, s + o * h))
    return acc / h


def c3_step(c3: float) -> float:
    return 1e-4 * min(c3, ell.C3_MAX - c3)


def jacobian_of_field(fn, c3: float, s: float, h_s: float = 1e-3) -> np.ndarray:
    """d_l fn at (c3, s) by a fourth-order central stencil; shape (4, 4, 4).

    Theta derivatives vanish identically by toric invariance.
    """
    h_c = c3_step(c3)
    lo, hi = ell.DEFAULT_GUARD
    if c3 - 2.0 * h_c < lo or c3 + 2.0 * h_c > hi:
        raise StencilError(f"stencil around c3={c3} leaves the admissible band")
    d = np.zeros((4, 4, 4))
    d[C3] = _derivative(fn, c3, s, C3, h_c)
    d[S] = _derivative(fn, c3, s, S, h_s)
    return d


def nijenhuis_tensor(fn, c3: float, s: float) -> np.ndarray:
    """N^k_ij = I^l_i d_l I^k_j - I^l_j d_l I^k_i - I^k_l (d_i I^l_j - d_j I^l_i)."""
    m = fn(c3, s)
    d = jacobian_of_field(fn, c3, s)  # d[l, k, j] = d_l I^k_j
    a = np.einsum("li,lkj->kij", m, d)
    b = np.einsum("kl,ilj->kij", m, d)
    return a - np.transpose(a, (0, 2, 1)) - (b - np.transpose(b, (0, 2, 1)))


def nijenhuis(kind: Kind | str, p: PolarPoint, dt: float = 0.0) -> float:
    kind = Kind(kind)
    if kind is Kind.I_MINUS:
        fn = i_minus_matrix
    elif kind is Kind.I_PLUS:
        fn = lambda c, s: i_plus_matrix(c, s, dt)  # noqa: E731
    else:
        raise DomainError(f"nijenhuis needs an almost complex structure, not {kind}")
    return float(np.max(np.abs(nijenhuis_tensor(fn, p.c3, p.s))))


def exterior_derivative_residual(c3: float, s: float, dt: float) -> float:
    """max |dF| by finite differences; only the (c3, s, theta_i) components can be nonzero."""
    d = jacobian_of_field(lambda c, x: f_matrix(c, x, dt), c3, s)  # d[l, a, b] = d_l F_ab
    df = d + np.transpose(d, (1, 2, 0)) + np.transpose(d, (2, 0, 1))
    return float(np.max(np.abs(df)))


# -- reports and scans --------------------------------------------------------


def gks_report(p: PolarPoint, dt: float, *, with_nijenhuis: bool = True) -> GksReport:
    im = i_minus_matrix(p.c3, p.s)
    ip = i_plus_matrix(p.c3, p.s, dt)
    q = q_matrix(p.c3)
    f = f_matrix(p.c3, p.s, dt)
    g = im.T @ f - f @ im
    eye = np.eye(4)
    inf = lambda a: float(np.max(np.abs(a)))  # noqa: E731
    return GksReport(
        residual_GKS_I=inf(ip - im + q @ f),
        residual_GKS_II=inf(im.T @ f + f @ ip),
        residual_I2=max(inf(im @ im + eye), inf(ip @ ip + eye)),
        residual_hermitian_plus=inf(ip.T @ g @ ip - g),
        residual_hermitian_minus=inf(im.T @ g @ im - g),
        min_metric_eigenvalue=float(np.linalg.eigvalsh(0.5 * (g + g.T))[0]),
        nijenhuis_max=nijenhuis(Kind.I_PLUS, p, dt) if with_nijenhuis else float("nan"),
    )


@dataclass(frozen=True)
class PositivityResult:
    dt: float
    min_eigenvalue: float
    argmin: tuple[float, float, float]
    n_points: int


def positivity_scan(
    dt: float,
    c3_range: tuple[float, float] = (0.005, 0.032),
    n_c3: int = 20,
    n_s: int = 20,
    n_theta: int = 4,
) -> PositivityResult:
    """Smallest eigenvalue of g over a (c3, s, theta) grid.

    The fields do not depend on theta; the theta axis is still sampled so the
    count of evaluated points matches the requested grid.
    """
    lo, hi = ell.DEFAULT_GUARD
    if not (lo <= c3_range[0] < c3_range[1] <= hi):
        raise DomainError("scan range outside the admissible c3 band")
    best = (math.inf, (math.nan, math.nan, math.nan))
    c3s = np.linspace(*c3_range, n_c3)
    ss = np.linspace(0.0, 2.0 * math.pi, n_s, endpoint=False)
    thetas = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
    for c3 in c3s:
        for s in ss:
            lam = float(np.linalg.eigvalsh(metric_matrix(float(c3), float(s), dt))[0])
            for th in thetas:
                if lam < best[0]:
                    best = (lam, (float(c3), float(s), float(th)))
    return PositivityResult(float(dt), best[0], best[1], n_c3 * n_s * n_theta)
