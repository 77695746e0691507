"""Residual batteries shared by the command line and the acceptance tests.

Each suite returns a :class:`CheckReport`: a list of named residuals with the
tolerance they are held to and a short description of the identity.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import elliptic as ell
from . import flow, gkp, gks, groupoid, toric
from .flow import PolarPoint

DEFAULT_SEED = 42
GKS_BAND = (0.002, 0.035)


@dataclass
class CheckItem:
    id: str
    anchor: str
    residual: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.residual = float(self.residual)
        self.passed = bool(math.isfinite(self.residual) and self.residual < self.tolerance)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.id:<34} residual={self.residual:.3e} tol={self.tolerance:.1e}  {self.anchor}"


@dataclass
class CheckReport:
    suite: str
    items: list[CheckItem] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(i.passed for i in self.items)

    def add(self, id: str, anchor: str, residual: float, tolerance: float) -> None:
        self.items.append(CheckItem(id, anchor, residual, tolerance))

    def get(self, id: str) -> CheckItem:
        for item in self.items:
            if item.id == id:
                return item
        raise KeyError(id)

    def apply_overrides(self, tols: dict[str, float]) -> None:
        for i, item in enumerate(self.items):
            if item.id in tols:
                self.items[i] = CheckItem(item.id, item.anchor, item.residual, tols[item.id])

    def lines(self) -> list[str]:
        head = f"== {self.suite}: {'PASS' if self.passed else 'FAIL'} ({self.seconds:.2f} s)"
        return [head] + [i.line() for i in self.items]


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.seconds = time.perf_counter() - t0
        return rep

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def c3_grid(n: int = 25) -> np.ndarray:
    """Interior sample of the c3 interval, denser nowhere in particular."""
    return np.linspace(0.02, 0.98, n) * ell.C3_MAX


def _inf(a) -> float:
    return float(np.max(np.abs(a)))


# -- elliptic -----------------------------------------------------------------


def random_cell_points(lat: ell.LatticeData, rng, n: int) -> np.ndarray:
    a = rng.uniform(0.05, 0.95, n)
    b = rng.uniform(0.05, 0.95, n)
    return 2.0 * a * lat.omega1 + 2.0 * b * lat.omega2


def wp_ode_residual(z, lat: ell.LatticeData) -> np.ndarray:
    p, dp = ell.wp(z, lat), ell.wp_prime(z, lat)
    rhs = 4.0 * p**3 - lat.g2 * p - lat.g3
    scale = np.abs(dp) ** 2 + np.abs(4.0 * p**3) + abs(lat.g2) * np.abs(p) + abs(lat.g3)
    return np.abs(dp**2 - rhs) / scale


@_timed
def elliptic_suite(seed: int = DEFAULT_SEED, n_c3: int = 25, n_z: int = 50) -> CheckReport:
    rep = CheckReport("elliptic")
    rng = np.random.default_rng(seed)
    leg, ode, per, tert_p, tert_dp, sixth, special, zeta_sp, roots = ([] for _ in range(9))
    for c3 in c3_grid(n_c3):
        lat = ell.lattice(float(c3))
        leg.append(lat.legendre_residual())
        z = random_cell_points(lat, rng, n_z)
        ode.append(np.max(wp_ode_residual(z, lat)))
        w1, w2 = lat.omega1, lat.omega2
        p0 = ell.wp(z, lat)
        per.append(
            max(
                _inf((ell.wp(z + 2 * w1, lat) - p0) / (1 + np.abs(p0))),
                _inf((ell.wp(z + 2 * w2, lat) - p0) / (1 + np.abs(p0))),
                _inf(ell.zeta_w(z + 2 * w1, lat) - ell.zeta_w(z, lat) - 2 * lat.eta1),
                _inf(ell.zeta_w(z + 2 * w2, lat) - ell.zeta_w(z, lat) - 2 * lat.eta2),
            )
        )
        tf = lat.tau_f
        tert_p.append(abs(ell.wp(tf, lat) - 1.0 / 12.0))
        tert_dp.append(abs(ell.wp_prime(tf, lat) + c3) / c3)
        direct, closed = ell.tertiary_values(lat), ell.tertiary_closed_forms(lat)
        sixth.append(
            max(
                abs(getattr(direct, k) - getattr(closed, k)) / max(1.0, abs(getattr(closed, k)))
                for k in ("wp_tf_half", "wp_w2_plus_tf", "wp_prime_tf_half", "wp_prime_w2_plus_tf")
            )
        )
        special.append(abs((1.0 / 12.0 - direct.wp_tf_half) ** 2 * (1.0 / 12.0 - lat.e1) - c3**2) / c3**2)
        zeta_sp.append(
            max(
                abs(ell.zeta_w(tf, lat) - (1.0 / 6.0 + 2.0 * lat.eta1 / 3.0)),
                abs(ell.zeta_w(2 * tf, lat) - (-1.0 / 6.0 + 4.0 * lat.eta1 / 3.0)),
            )
        )
        roots.append(
            max(
                abs(ell.wp(w1, lat) - lat.e1) / abs(lat.e1),
                abs(ell.wp(w2, lat) - lat.e2) / abs(lat.e2),
                abs(ell.wp(w1 + w2, lat) - lat.e3) / max(abs(lat.e3), abs(lat.e1)),
            )
        )
    rep.add("legendre_relation", "eta1*omega2 - eta2*omega1 = i*pi/2", max(leg), 1e-12)
    rep.add("wp_differential_equation", "wp'^2 = 4wp^3 - g2 wp - g3 (relative, random z)", max(ode), 1e-10)
    rep.add("periodicity", "wp doubly periodic, zeta shifts by 2*eta_i", max(per), 1e-10)
    rep.add("wp_at_half_periods", "wp(omega1)=e1, wp(omega2)=e2, wp(omega1+omega2)=e3", max(roots), 1e-11)
    rep.add("wp_tertiary_value", "wp(2*omega1/3) = 1/12", max(tert_p), 1e-10)
    rep.add("wp_prime_tertiary_value", "wp'(2*omega1/3) = -c3 (relative)", max(tert_dp), 1e-10)
    rep.add("sixth_period_closed_forms", "wp, wp' at tau_f/2 and omega2+tau_f in terms of e1, e2, c3", max(sixth), 1e-10)
    rep.add("special_point_product", "(1/12 - wp(tau_f/2))^2 (1/12 - e1) = c3^2 (relative)", max(special), 1e-10)
    rep.add("zeta_special_values", "zeta(2w1/3) = 1/6 + 2eta1/3, zeta(4w1/3) = -1/6 + 4eta1/3", max(zeta_sp), 1e-10)
    return rep


# -- limits -------------------------------------------------------------------


def richardson_limit(fn, h: float, n: int = 4) -> float:
    """Polynomial extrapolation to x = 0 from x = h, 2h, 4h, ... (Neville)."""
    xs = h * 2.0 ** np.arange(n)
    table = [fn(float(x)) for x in xs]
    for k in range(1, n):
        table = [(xs[i + k] * table[i] - xs[i] * table[i + 1]) / (xs[i + k] - xs[i]) for i in range(n - k)]
    return float(table[0])


@_timed
def limits_suite(seed: int = DEFAULT_SEED) -> CheckReport:
    rep = CheckReport("limits")
    hi = lambda e: ell.lattice(ell.C3_MAX - e)  # noqa: E731
    lo = lambda c: ell.lattice(c)  # noqa: E731
    w1 = richardson_limit(lambda e: hi(e).omega1, 1e-4)
    rep.add("omega1_at_centre", "omega1 -> sqrt(3)*pi as c3 -> 1/27", abs(w1 - math.sqrt(3) * math.pi), 1e-4)
    e1 = richardson_limit(lambda e: hi(e).eta1, 1e-4)
    rep.add("eta1_at_centre", "eta1 -> sqrt(3)*pi/36 as c3 -> 1/27", abs(e1 - math.sqrt(3) * math.pi / 36), 1e-4)
    w2 = richardson_limit(lambda c: lo(c).omega2.imag, 1e-5)
    rep.add("omega2_at_boundary", "omega2 -> i*pi as c3 -> 0", abs(w2 - math.pi), 1e-4)
    e2 = richardson_limit(lambda c: lo(c).eta2.imag, 1e-5)
    rep.add("eta2_at_boundary", "eta2 -> -i*pi/12 as c3 -> 0", abs(e2 + math.pi / 12), 1e-4)
    return rep


# -- periods along c3 ----------------------------------------------------------


def fd_step(c3: float, rel: float = 1e-3) -> float:
    """Difference step in c3 scaled by the distance to the nearer endpoint.

    Derivatives in c3 grow like inverse powers of that distance, so a fixed
    step loses accuracy towards either end of the interval.
    """
    return rel * min(c3, ell.C3_MAX - c3)


@_timed
def periods_suite(seed: int = DEFAULT_SEED) -> CheckReport:
    rep = CheckReport("periods")
    first, legendre, second = [], [], []
    for c3 in (0.005, 0.01, 1.0 / 54.0, 0.025, 0.03):
        h = fd_step(c3)
        lp, lm, lat = ell.lattice(c3 + h), ell.lattice(c3 - h), ell.lattice(c3)
        d = ell.d_c3_periods(lat)
        fd = {
            "omega1": (lp.omega1 - lm.omega1) / (2 * h),
            "omega2": (lp.omega2 - lm.omega2) / (2 * h),
            "eta1": (lp.eta1 - lm.eta1) / (2 * h),
            "eta2": (lp.eta2 - lm.eta2) / (2 * h),
        }
        first.append(
            max(
                abs(d.d_omega1 - fd["omega1"]) / abs(d.d_omega1),
                abs(d.d_omega2 - fd["omega2"]) / abs(d.d_omega2),
                abs(d.d_eta1 - fd["eta1"]) / abs(d.d_eta1),
                abs(d.d_eta2 - fd["eta2"]) / abs(d.d_eta2),
            )
        )
        legendre.append(abs(d.d_eta1 * lat.omega2 + lat.eta1 * d.d_omega2 - d.d_eta2 * lat.omega1 - lat.eta2 * d.d_omega1))
        hh = fd_step(c3, 2e-3)
        p = lambda c: c * (1.0 - 27.0 * c)  # noqa: E731
        w = lambda c: ell.lattice(c).omega1  # noqa: E731
        lhs = (p(c3 + hh / 2) * (w(c3 + hh) - w(c3)) - p(c3 - hh / 2) * (w(c3) - w(c3 - hh))) / hh**2
        second.append(abs(lhs - 6.0 * lat.omega1) / (6.0 * lat.omega1))
    rep.add("period_derivatives", "d/dc3 (eta_i, omega_i) by the traceless linear system", max(first), 1e-6)
    rep.add("legendre_preserved", "d/dc3 (eta1 omega2 - eta2 omega1) = 0", max(legendre), 1e-10)
    rep.add("omega1_second_order", "d/dc3 (c3(1-27c3) d omega1/dc3) = 6 omega1", max(second), 1e-5)
    return rep


# -- area ---------------------------------------------------------------------


def triangle_area_integral() -> tuple[float, float]:
    """2 * int_0^{1/27} omega1 dc3 by adaptive quadrature (log singularity at 0)."""
    f = lambda c: ell.lattice(c, None).omega1  # noqa: E731
    val, err = quad(f, 0.0, ell.C3_MAX, limit=200, epsabs=1e-13, epsrel=1e-13)
    return 2.0 * val, 2.0 * err


@_timed
def area_suite(seed: int = DEFAULT_SEED) -> CheckReport:
    rep = CheckReport("area")
    val, _ = triangle_area_integral()
    rep.add("triangle_area", "2 int omega1 dc3 = 1/2, the area of the moment triangle", abs(val - 0.5), 1e-6)
    return rep


# -- flow ---------------------------------------------------------------------


def _random_polar(rng, n: int, band=GKS_BAND):
    return rng.uniform(*band, n), rng.uniform(0.0, 2.0 * math.pi, n)


@_timed
def flow_suite(seed: int = DEFAULT_SEED, n: int = 50) -> CheckReport:
    rep = CheckReport("flow")
    rng = np.random.default_rng(seed)
    c3s, ss = _random_polar(rng, n)
    zeta_form, ode, sums, prods, rk, sum_rule, prod_rule, jac = ([] for _ in range(8))
    for c3, s in zip(c3s, ss):
        y = flow.y_array(c3, s)
        zeta_form.append(_inf(y - flow.y_via_zeta_array(c3, s)))
        ode.append(_inf(flow.flow_residual(c3, s)))
        sums.append(abs(y.sum() - 1.0))
        prods.append(abs(y.prod() - c3) / c3)
        dc = flow.dy_dc3_array(c3, s)
        sum_rule.append(abs(dc.sum()) / max(1.0, _inf(dc)))
        prod_rule.append(abs(dc[0] * y[1] * y[2] + dc[1] * y[0] * y[2] + dc[2] * y[0] * y[1] - 1.0))
    for c3, s in zip(c3s[:10], ss[:10]):
        lat = ell.lattice(float(c3))
        p = PolarPoint(float(c3), float(s))
        y0 = flow.y_of_polar(p)
        for frac in (0.1, 0.37, 1.0):
            dt = 2.0 * lat.omega1 * frac
            a = flow.y_of_polar(flow.flow_map(p, dt)).as_array()
            b = flow.ode_oracle(y0, dt).as_array()
            rk.append(_inf(a - b))
        # d(c3, s)/d(y1, y2) by central differences of the chart inverse
        h = 1e-6
        cols = []
        for k in range(2):
            e = np.zeros(2)
            e[k] = h
            qp = flow.polar_of_y(*(y0.as_array()[:2] + e))
            qm = flow.polar_of_y(*(y0.as_array()[:2] - e))
            ds = math.remainder(qp.s - qm.s, 2.0 * math.pi)
            cols.append([(qp.c3 - qm.c3) / (2 * h), ds / (2 * h)])
        det = np.linalg.det(np.array(cols).T)
        jac.append(abs(det - math.pi / lat.omega1) / (math.pi / lat.omega1))
    rep.add("zeta_representation", "y via zeta(t -+ tau_f) equals y via wp", max(zeta_form), 1e-10)
    rep.add("flow_equation", "(pi/omega1) dy1/ds = y1 (y2 - y3) and cyclic", max(ode), 1e-9)
    rep.add("sum_conserved", "y1 + y2 + y3 = 1", max(sums), 1e-12)
    rep.add("product_is_c3", "y1 y2 y3 = c3 (relative)", max(prods), 1e-11)
    rep.add("runge_kutta_agreement", "closed form vs adaptive RK over dt in [0, 2 omega1]", max(rk), 1e-8)
    rep.add("c3_derivative_sum", "sum_i d y^i/dc3 = 0", max(sum_rule), 1e-9)
    rep.add("c3_derivative_product", "d (y1 y2 y3)/dc3 = 1", max(prod_rule), 1e-9)
    rep.add("polar_jacobian", "d(c3, s)/d(y1, y2) = pi/omega1 (relative)", max(jac), 1e-6)
    return rep


# -- toric --------------------------------------------------------------------


def _random_interior(poly: toric.DelzantPolygon, rng, n: int) -> list[np.ndarray]:
    pts = []
    while len(pts) < n:
        y = rng.uniform(-0.1, 1.1, 2)
        if np.all(poly.faces(y) > 0.02):
            pts.append(y)
    return pts


@_timed
def toric_suite(seed: int = DEFAULT_SEED, n: int = 20) -> CheckReport:
    rep = CheckReport("toric")
    rng = np.random.default_rng(seed)
    omega = toric.symplectic_ytheta()
    j2, herm, compat, inv, eig = [], [], [], [], []
    for poly in (toric.CP2, toric.SQUARE):
        for y in _random_interior(poly, rng, n):
            J = toric.complex_structure_ytheta(poly, y)
            g = toric.metric_ytheta(poly, y)
            gd = toric.guillemin(poly, y)
            j2.append(_inf(J @ J + np.eye(4)))
            herm.append(_inf(J.T @ g @ J - g))
            compat.append(_inf(omega @ J - g))
            inv.append(_inf(gd.hess @ gd.hess_inv - np.eye(2)))
            eig.append(-float(np.linalg.eigvalsh(g)[0]))
    hinv, norm, zmod, chart, q11, schouten = [], [], [], [], [], []
    corners = toric.CP2.corners()
    for y in _random_interior(toric.CP2, rng, n):
        theta = rng.uniform(0.0, 2.0 * math.pi, 2)
        gd = toric.guillemin(toric.CP2, y)
        hinv.append(_inf(gd.hess_inv - toric.hess_inv_cp2(y)))
        norm.append(abs(toric.poisson_norm(y) - toric.poisson_norm_closed(y)))
        z = toric.complex_coords(toric.CP2, y, theta)
        y3 = 1.0 - y.sum()
        zmod.append(max(_inf(np.abs(z) ** 2 * y3 - y), _inf(toric.y_from_z(z) - y)))
        for a in range(3):
            for b in range(3):
                A = toric.transition_matrix(corners[a], corners[b])
                za = toric.complex_coords(toric.CP2, y, theta, corners[a])
                zb = toric.complex_coords(toric.CP2, y, theta, corners[b])
                chart.append(_inf(toric.monomial(za, A) - zb) / max(1.0, _inf(zb)))
        J = toric.complex_structure_ytheta(toric.CP2, y)
        Q = toric.hitchin_Q_ytheta(y)
        q11.append(_inf(0.5 * (Q + J @ Q @ J.T)))
        x = np.concatenate([theta, y])
        schouten.append(toric.schouten_residual(lambda v: toric.hitchin_Q_ytheta(v[2:]), x))
    rep.add("J_squared", "J^2 = -1 (triangle and square)", max(j2), 1e-12)
    rep.add("J_hermitian_metric", "J^T g J = g", max(herm), 1e-10)
    rep.add("kahler_compatibility", "omega(., J.) = g", max(compat), 1e-10)
    rep.add("hessian_inverse", "G_ij G^jk = delta", max(inv), 1e-12)
    rep.add("metric_positive", "min eigenvalue of g > 0 (residual is its negative)", max(eig), 0.0)
    rep.add("inverse_hessian_closed_form", "G^ij = 2[[y1(1-y1), -y1y2], [-y1y2, y2(1-y2)]]", max(hinv), 1e-12)
    rep.add("poisson_norm", "|sigma|^2 = det(G_ij)^-1 / 2 = 2 y1 y2 y3", max(norm), 1e-12)
    rep.add("inhomogeneous_coordinates", "|z^i|^2 y3 = y^i and its inversion", max(zmod), 1e-12)
    rep.add("corner_transition", "monomial transition between all corner charts", max(chart), 1e-10)
    rep.add("Q_type", "(1,1) part of Q vanishes under J", max(q11), 1e-12)
    rep.add("Q_jacobi", "Schouten bracket [Q, Q] = 0 by finite differences", max(schouten), 1e-8)
    return rep


# -- generalised Kähler structure --------------------------------------------


def chain_rule_i_minus(c3: float, s: float) -> np.ndarray:
    """The toric complex structure transported into the (theta, c3, s) chart."""
    y = flow.y_array(c3, s)
    P = np.eye(4)
    P[2:, 2:] = flow.jacobian_polar(c3, s)
    return np.linalg.solve(P, toric.complex_structure_ytheta(toric.CP2, y[:2]) @ P)


def pullback_oracle_i_plus(c3: float, s: float, dt: float, h: float = 1e-6) -> np.ndarray:
    """(phi_*)^-1 I_- phi_* with phi_* from central differences of flow_map."""
    def phi(c):
        return flow.flow_map(PolarPoint(c, s), dt)

    sp, sm = phi(c3 + h).s, phi(c3 - h).s
    D = np.eye(4)
    D[gks.S, gks.C3] = math.remainder(sp - sm, 2.0 * math.pi) / (2.0 * h)
    q = phi(c3)
    return np.linalg.solve(D, gks.i_minus_matrix(c3, q.s) @ D)


def gks_samples(seed: int, n: int):
    rng = np.random.default_rng(seed)
    c3s, ss = _random_polar(rng, n)
    dts = rng.uniform(0.01, 2.0, n)
    return list(zip(map(float, c3s), map(float, ss), map(float, dts)))


def small_dt_law(c3: float, s: float, dt: float = 1e-3) -> tuple[float, float]:
    """(|F/dt - d(I^* dh)|, same after one Richardson step)."""
    f1 = gks.f_matrix(c3, s, dt)
    f2 = gks.f_matrix(c3, s, dt / 2.0)
    d = gks.ddc_h_matrix(c3, s)
    return _inf(f1 / dt - d), _inf((4.0 * f2 - f1) / dt - d)


@_timed
def gks_suite(seed: int = DEFAULT_SEED, n: int = 200) -> CheckReport:
    rep = CheckReport("gks")
    eye = np.eye(4)
    r = {k: [] for k in ("i2", "gks1", "gks2", "sym", "herm", "block", "nij", "closed", "chain", "pull", "qpush", "comm", "sigma", "q11", "period")}
    small, small_rich = [], []
    for k, (c3, s, dt) in enumerate(gks_samples(seed, n)):
        im = gks.i_minus_matrix(c3, s)
        ip = gks.i_plus_matrix(c3, s, dt)
        q = gks.q_matrix(c3)
        f = gks.f_matrix(c3, s, dt)
        g = im.T @ f - f @ im
        r["i2"].append(max(_inf(im @ im + eye), _inf(ip @ ip + eye)))
        r["gks1"].append(_inf(ip - im + q @ f))
        r["gks2"].append(_inf(im.T @ f + f @ ip))
        r["sym"].append(_inf(g - g.T))
        r["herm"].append(max(_inf(ip.T @ g @ ip - g), _inf(im.T @ g @ im - g)))
        r["block"].append(max(_inf(m[:2, :2]) + _inf(m[2:, 2:]) for m in (im, ip)))
        r["comm"].append(_inf(q - (ip @ im - im @ ip) @ np.linalg.inv(g)) / _inf(q))
        for imat in (im, ip):
            sig = gks.sigma_complex(imat, q)
            r["sigma"].append(_inf(gks.type_projection(sig, imat, holomorphic=False)))
            r["q11"].append(_inf(gks.one_one_part(q, imat)))
        r["period"].append(_inf(gks.f_matrix(c3, s + 2.0 * math.pi, dt) - f) / max(1.0, _inf(f)))
        if k < 50:
            p = PolarPoint(c3, s)
            r["nij"].append(gks.nijenhuis(gks.Kind.I_PLUS, p, dt))
            r["closed"].append(gks.exterior_derivative_residual(c3, s, dt))
            r["chain"].append(_inf(chain_rule_i_minus(c3, s) - im) / _inf(im))
            r["pull"].append(_inf(pullback_oracle_i_plus(c3, s, 0.2) - gks.i_plus_matrix(c3, s, 0.2)) / _inf(im))
            y = flow.y_array(c3, s)
            P = np.eye(4)
            P[2:, 2:] = flow.jacobian_polar(c3, s)
            Pi = np.linalg.inv(P)
            r["qpush"].append(_inf(Pi @ toric.hitchin_Q_ytheta(y[:2]) @ Pi.T - q))
        if k < 20:
            a, b = small_dt_law(c3, s)
            small.append(a)
            small_rich.append(b)
    rep.add("I_squared", "I_+^2 = I_-^2 = -1", max(r["i2"]), 1e-9)
    rep.add("GKS_I", "I_+ - I_- + Q F = 0", max(r["gks1"]), 1e-8)
    rep.add("GKS_II", "I_-^T F + F I_+ = 0", max(r["gks2"]), 1e-8)
    rep.add("metric_symmetric", "g = I_-^T F - F I_- is symmetric", max(r["sym"]), 1e-12)
    rep.add("metric_hermitian", "I_+^T g I_+ = g = I_-^T g I_-", max(r["herm"]), 1e-8)
    rep.add("block_structure", "theta-theta and base-base blocks of I_+- vanish", max(r["block"]), 1e-12)
    rep.add("hitchin_poisson", "Q = [I_+, I_-] g^-1 (relative)", max(r["comm"]), 1e-7)
    rep.add("sigma_holomorphic", "(0,2) part of (I Q + i Q)/4 vanishes for I_+ and I_-", max(r["sigma"]), 1e-9)
    rep.add("Q_type", "(1,1) part of Q vanishes for I_+ and I_-", max(r["q11"]), 1e-9)
    rep.add("s_periodicity", "F(s + 2 pi) = F(s)", max(r["period"]), 1e-12)
    rep.add("nijenhuis_I_plus", "Nijenhuis tensor of I_+ (finite differences)", max(r["nij"]), 1e-5)
    rep.add("F_closed", "dF = 0 (finite differences)", max(r["closed"]), 1e-6)
    rep.add("I_minus_chain_rule", "I_- equals the toric J transported to (c3, s)", max(r["chain"]), 1e-8)
    rep.add("I_plus_pullback", "I_+ equals the flow pullback of I_- at dt = 0.2", max(r["pull"]), 1e-6)
    rep.add("Q_pushforward", "Q equals 4 y1y2y3 dy1^dy2 - dth1^dth2 transported", max(r["qpush"]), 1e-8)
    rep.add("small_dt_law", "F/dt -> d(I^* dh) at dt = 1e-3", max(small), 1e-4)
    rep.add("small_dt_law_richardson", "(4F(dt/2) - F(dt))/dt -> d(I^* dh) at dt = 1e-3", max(small_rich), 1e-4)
    return rep


@_timed
def positivity_suite(seed: int = DEFAULT_SEED, dt: float = 0.05) -> CheckReport:
    rep = CheckReport("positivity")
    res = gks.positivity_scan(dt)
    rep.add("metric_positive", f"min eigenvalue of g on 20x20x4 grid at dt={dt} (residual is its negative)", -res.min_eigenvalue, 0.0)
    return rep


# -- groupoid -----------------------------------------------------------------


def _random_groupoid_point(rng, scale: float = 0.7) -> groupoid.GroupoidPoint:
    v = scale * (rng.normal(size=4) + 1j * rng.normal(size=4))
    return groupoid.GroupoidPoint.from_array(v)


@_timed
def groupoid_suite(seed: int = DEFAULT_SEED, n: int = 100) -> CheckReport:
    rep = CheckReport("groupoid")
    rng = np.random.default_rng(seed)
    r = {k: [] for k in ("inv", "darb", "darb_st", "unit", "assoc", "st", "bracket", "spush", "tpush", "kernel", "toy", "toy_inv", "chart", "jac")}
    corners = toric.CP2.corners()
    for k in range(n):
        g = _random_groupoid_point(rng)
        r["inv"].append(groupoid.inverse_residual(g))
        r["darb"].append(groupoid.darboux_residual(g))
        d = groupoid.darboux(g)
        r["darb_st"].append(max(_inf(groupoid.source_darboux(d) - groupoid.source(g)), _inf(groupoid.target_darboux(d) - groupoid.target(g))))
        ga = g.as_array()
        left = groupoid.compose(g, groupoid.unit(groupoid.source(g)))
        right = groupoid.compose(groupoid.unit(groupoid.target(g)), g)
        r["unit"].append(max(_inf(left.as_array() - ga), _inf(right.as_array() - ga)))
        h = groupoid.GroupoidPoint(*groupoid.target(g), *(0.5 * (rng.normal(size=2) + 1j * rng.normal(size=2))))
        kk = groupoid.GroupoidPoint(*groupoid.target(h), *(0.5 * (rng.normal(size=2) + 1j * rng.normal(size=2))))
        hg = groupoid.compose(h, g)
        a = groupoid.compose(kk, hg)
        b = groupoid.compose(groupoid.compose(kk, h), g)
        r["assoc"].append(_inf(a.as_array() - b.as_array()))
        r["st"].append(max(_inf(groupoid.source(hg) - groupoid.source(g)), _inf(groupoid.target(hg) - groupoid.target(h))))
        chk = groupoid.target_pushforward_check(g)
        r["bracket"].append(chk["bracket_t_s"])
        r["spush"].append(chk["s_push_minus_sigma"])
        r["tpush"].append(chk["t_push_sigma"])
        r["kernel"].append(chk["kernel_orthogonality"])
        x = rng.normal(size=4) + 1j * rng.normal(size=4)
        r["toy"].append(abs(groupoid.toy_det(*x) - 1.0))
        r["toy_inv"].append(_inf(groupoid.toy_omega(*x) @ (-groupoid.toy_minus_inverse(*x)) - np.eye(4)))
        if k < 20:
            fd = groupoid.fd_jacobian(lambda v: groupoid.target(groupoid.GroupoidPoint.from_array(v)), ga)
            fd2 = groupoid.fd_jacobian(lambda v: groupoid.darboux(groupoid.GroupoidPoint.from_array(v)).as_array(), ga)
            r["jac"].append(max(_inf(fd - groupoid.jac_target(g)), _inf(fd2 - groupoid.jac_darboux(g))))
            A = toric.transition_matrix(corners[0], corners[1 + k % 2])
            t = groupoid.transport_residuals(g, A)
            r["chart"].append(max(t["source"], t["target"]))
    rep.add("omega_pi_inverse", "Omega_0 Pi = id", max(r["inv"]), 1e-12)
    rep.add("darboux_form", "Darboux chart pulls dq^dp back to i Omega_0", max(r["darb"]), 1e-12)
    rep.add("darboux_source_target", "s, t in Darboux coordinates", max(r["darb_st"]), 1e-12)
    rep.add("unit_law", "g o 1 = g = 1 o g", max(r["unit"]), 1e-9)
    rep.add("associativity", "(k o h) o g = k o (h o g)", max(r["assoc"]), 1e-9)
    rep.add("composition_source_target", "s(h o g) = s(g), t(h o g) = t(h)", max(r["st"]), 1e-10)
    rep.add("bracket_t_s", "{t^* f, s^* g}_Pi = 0", max(r["bracket"]), 1e-10)
    rep.add("source_poisson", "s_* Pi = -sigma", max(r["spush"]), 1e-8)
    rep.add("target_poisson", "t_* Pi = +sigma", max(r["tpush"]), 1e-8)
    rep.add("kernel_orthogonality", "Omega_0(ker s_*, ker t_*) = 0", max(r["kernel"]), 1e-10)
    rep.add("toy_determinant", "det Omega = 1 for the model on C^2", max(r["toy"]), 1e-12)
    rep.add("toy_inverse", "the stated inverse of the model form", max(r["toy_inv"]), 1e-12)
    rep.add("jacobian_oracle", "analytic Jacobians vs central differences", max(r["jac"]), 1e-8)
    rep.add("chart_transport", "s and t commute with the corner change of chart", max(r["chart"]), 1e-10)
    return rep


# -- potential ----------------------------------------------------------------


@_timed
def gkp_suite(seed: int = DEFAULT_SEED) -> CheckReport:
    rep = CheckReport("gkp")
    rng = np.random.default_rng(seed)
    zero, slope, uform, local = [], [], [], []
    for c3, s in zip(*_random_polar(rng, 10)):
        p = PolarPoint(float(c3), float(s))
        zero.append(abs(gkp.potential(p, 0.0).K))
        slope.append(abs(gkp.slope_at_zero(p) - 0.25 * math.log(c3)))
        dt = float(rng.uniform(0.1, 2.0))
        uform.append(abs(gkp.potential(p, dt).correction_part - gkp.correction_u_form(p, dt)))
        th = rng.uniform(0, 2 * math.pi, 2)
        q0 = gkp.local_Q_coords(p, 0.0, th)
        y = flow.y_array(p.c3, p.s)
        local.append(_inf(q0 - toric.cp2_z_closed(y[:2], th)))
        qt = gkp.local_Q_coords(p, dt, th)
        yt = flow.y_array(p.c3, p.s + math.pi * dt / p.lattice.omega1)
        local.append(_inf(np.abs(qt) ** 4 - y[:2] * yt[:2] / (y[2] * yt[2])) / _inf(np.abs(qt) ** 4))
    p = PolarPoint(0.02, 1.0)
    riemann = abs(gkp.potential(p, 0.5).correction_part - gkp.correction_trapezoid(p, 0.5))
    reg = gkp.correction_regularity_check([10.0**-k for k in range(2, 6)], 0.7, 0.3)
    rep.add("K_at_zero", "K(dt = 0) = 0", max(zero), 1e-300)
    rep.add("slope_at_zero", "dK/dt at 0 = log(c3)/4", max(slope), 1e-6)
    rep.add("riemann_oracle", "Gauss-Legendre vs 1e5-panel trapezoid at (0.02, 1.0, 0.5)", riemann, 1e-8)
    rep.add("u_form", "time integral vs rescaled-time integral", max(uform), 1e-10)
    rep.add("local_coordinates", "Q^a revert to z^a at dt = 0; |Q^a|^4 = y0 yt / (y0^3 yt^3)", max(local), 1e-12)
    rep.add("face_regularity", "correction part bounded as c3 -> 0 (max |correction| / dt)", max(abs(c) for c in reg.correction) / 0.3, 1.0)
    return rep


SUITES = {
    "elliptic": elliptic_suite,
    "limits": limits_suite,
    "periods": periods_suite,
    "flow": flow_suite,
    "toric": toric_suite,
    "gks": gks_suite,
    "positivity": positivity_suite,
    "groupoid": groupoid_suite,
    "gkp": gkp_suite,
    "area": area_suite,
}


def run(suite: str, seed: int = DEFAULT_SEED) -> list[CheckReport]:
    names = list(SUITES) if suite == "all" else [suite]
    return [SUITES[name](seed=seed) for name in names]
