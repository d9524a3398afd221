"""Forward pipeline: from a helicoidal profile curve to natural coordinates.

Given a profile gamma(u) = (x(u), z(u)) and pitch h, the helicoidal surface

    f(u, v) = (x(u) cos v, x(u) sin v, z(u) + h v)

is singular exactly where xdot^2 + zdot^2 = 0 (for x != 0). Around a
singular point u0 of multiplicity k+1 the surface admits coordinates (s, t)
in which the metric is s^(2k) ds^2 + U(s)^2 dt^2:

  1. shear t = v + phi(u), phi' = h zdot / (x^2 + h^2), which makes the
     u-lines orthogonal to the screw direction; the sheared speed is
     |f~_u|^2 = xdot^2 + zdot^2 x^2 / (x^2 + h^2);
  2. the canonical parameter s(u) of that speed (|d gamma~/ds| = |s|^k);
  3. U(s) = sqrt(x(u(s))^2 + h^2).

``roundtrip`` drives this pipeline on a profile read back from a Bour datum
and compares the recovered metric function with the original U.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import bour
from .cusps import CanonicalParameter, canonical_from_speed
from .expr import SmoothFn
from .jets import Jet, jet_compose, jet_eval, jet_sqrt, variable_jet
from .profile import EdgeData, rho
from .quadrature import integrate_cumulative

DEFAULT_SAMPLES = 256
DEFAULT_TABULATION = 512
DEFAULT_TOL = 1e-8
QUAD_TOL = 1e-12


class SmoothProfile:
    """Profile curve from two expression trees."""

    def __init__(self, x: SmoothFn, z: SmoothFn):
        self.x = x
        self.z = z

    def x_value(self, u):
        return self.x(u)

    def z_value(self, u):
        return self.z(u)

    def x_dot(self, u):
        return jet_eval(self.x, u, 1).coeffs[1]

    def z_dot(self, u):
        return jet_eval(self.z, u, 1).coeffs[1]

    def x_jet(self, u0, order):
        return jet_eval(self.x, u0, order)

    def z_jet(self, u0, order):
        return jet_eval(self.z, u0, order)


class BourProfile:
    """Profile (x(s), z(s)) read back from a Bour datum.

    x is closed form; z values need one quadrature each, while all
    derivatives and jets come from closed forms on the integrand.
    """

    def __init__(self, data: EdgeData, tol=QUAD_TOL):
        self.data = data
        self.tol = tol

    def x_value(self, s):
        return bour.x_of_s(self.data, s)

    def z_value(self, s):
        return bour.z_of_s(self.data, s, self.tol)

    def x_dot(self, s):
        d = self.data
        u = d.u_value(s)
        up = jet_eval(d.U, s, 1).coeffs[1]
        return d.m**2 * u * up / bour.x_of_s(d, s)

    def z_dot(self, s):
        d = self.data
        u = d.u_value(s)
        return d.eps2 * d.m * s**d.k * u * rho(d, s) / bour.x_radicand(d, s)

    def x_jet(self, u0, order):
        d = self.data
        u_j = jet_eval(d.U, u0, order)
        return d.eps0 * jet_sqrt(d.m**2 * (u_j * u_j) - d.h**2)

    def z_jet(self, u0, order):
        d = self.data
        if u0 == 0.0:
            return bour._series_bundle(d, order)[4].truncated(order)
        u_j = jet_eval(d.U, u0, order + 1)
        v_j = u_j.differentiate() / (variable_jet(u0, order) ** d.k)
        u_j = u_j.truncated(order)
        denom = d.m**2 * (u_j * u_j) - d.h**2
        rho_j = jet_sqrt(denom - d.m**4 * (u_j * u_j) * (v_j * v_j))
        zp = d.eps2 * d.m * ((variable_jet(u0, order) ** d.k) * u_j * rho_j / denom)
        return zp.antiderivative(self.z_value(u0)).truncated(order)


class ReparamProfile:
    """A profile re-read in the s-parameter of an already-computed chart."""

    def __init__(self, base, canonical: CanonicalParameter):
        self.base = base
        self.canonical = canonical

    def _u(self, sigma):
        return float(self.canonical.u_of_s(sigma))

    def x_value(self, sigma):
        return self.base.x_value(self._u(sigma))

    def z_value(self, sigma):
        return self.base.z_value(self._u(sigma))

    def _du(self, sigma):
        return 1.0 / float(self.canonical.dsdu_of_u(self._u(sigma)))

    def x_dot(self, sigma):
        return self.base.x_dot(self._u(sigma)) * self._du(sigma)

    def z_dot(self, sigma):
        return self.base.z_dot(self._u(sigma)) * self._du(sigma)

    def x_jet(self, u0, order):
        if u0 != 0.0:
            raise ValueError("reparametrized profiles carry jets at 0 only")
        return jet_compose(self.base.x_jet(self.canonical.u0, order), self.canonical.u_jet.truncated(order))

    def z_jet(self, u0, order):
        if u0 != 0.0:
            raise ValueError("reparametrized profiles carry jets at 0 only")
        return jet_compose(self.base.z_jet(self.canonical.u0, order), self.canonical.u_jet.truncated(order))


@dataclass(frozen=True)
class HelicoidalInput:
    x: SmoothFn
    z: SmoothFn
    h: float
    interval: tuple

    def __post_init__(self):
        lo, hi = self.interval
        samples = [self.x(float(u)) for u in np.linspace(lo, hi, 64)]
        if any(v == 0.0 for v in samples) or min(samples) < 0.0 < max(samples):
            raise ValueError("profile meets the axis: x vanishes on the interval")

    @property
    def profile(self):
        return SmoothProfile(self.x, self.z)


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_minimize(g, a, b, width=1e-12):
    """Position of the minimum of g on [a, b], bracketed to ``width``."""
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    g1, g2 = g(x1), g(x2)
    while b - a > width:
        if g1 <= g2:
            b, x2, g2 = x2, x1, g1
            x1 = b - _GOLDEN * (b - a)
            g1 = g(x1)
        else:
            a, x1, g1 = x1, x2, g2
            x2 = a + _GOLDEN * (b - a)
            g2 = g(x2)
    return 0.5 * (a + b)


def _speed_sq(profile, u):
    return profile.x_dot(u) ** 2 + profile.z_dot(u) ** 2


def singular_set(inp: HelicoidalInput, n_samples=DEFAULT_SAMPLES):
    """Parameter values where the helicoidal surface is singular."""
    return _singular_set(inp.profile, inp.interval, n_samples)


def _singular_set(profile, interval, n_samples=DEFAULT_SAMPLES):
    if n_samples < 64:
        raise ValueError("n_samples must be at least 64")
    lo, hi = interval
    grid = np.linspace(lo, hi, n_samples)
    g = np.array([_speed_sq(profile, float(u)) for u in grid])
    speed_scale = max(math.sqrt(float(np.max(g))), 1e-30)
    accept = (1e-8 * speed_scale) ** 2
    roots = []

    def push(u):
        for r in roots:
            if abs(r - u) < 1e-9 * (hi - lo):
                return
        roots.append(u)

    for i in range(1, n_samples - 1):
        if g[i] <= g[i - 1] and g[i] <= g[i + 1]:
            u_star = _golden_minimize(
                lambda u: _speed_sq(profile, u), float(grid[i - 1]), float(grid[i + 1])
            )
            if _speed_sq(profile, u_star) <= accept:
                push(u_star)
    if g[0] <= accept:
        push(float(grid[0]))
    if g[-1] <= accept:
        push(float(grid[-1]))
    return sorted(roots)


@dataclass(frozen=True)
class GenericityCheck:
    ok: bool
    failures: tuple


def check_generic(inp: HelicoidalInput, u0, k, tol=DEFAULT_TOL):
    """Is u0 a generic singular point of multiplicity k+1 for this profile?"""
    return _check_generic(inp.profile, u0, k, tol)


def _check_generic(profile, u0, k, tol=DEFAULT_TOL):
    xj = profile.x_jet(u0, k + 1)
    zj = profile.z_jet(u0, k + 1)
    dx = [xj.derivative_value(i) for i in range(k + 2)]
    dz = [zj.derivative_value(i) for i in range(k + 2)]
    scale = max(max(abs(v) for v in dx), max(abs(v) for v in dz), 1e-300)
    failures = []
    if abs(dx[0]) <= tol * scale:
        failures.append(f"axis intersection: x({u0!r}) = {dx[0]!r}")
    for i in range(1, k + 1):
        if abs(dx[i]) > tol * scale:
            failures.append(f"x^({i})({u0!r}) = {dx[i]!r} does not vanish")
        if abs(dz[i]) > tol * scale:
            failures.append(f"z^({i})({u0!r}) = {dz[i]!r} does not vanish")
    if abs(dz[k + 1]) <= tol * scale:
        failures.append(f"z^({k + 1})({u0!r}) = {dz[k + 1]!r} vanishes (not generic)")
    return GenericityCheck(ok=not failures, failures=tuple(failures))


@dataclass
class NaturalChart:
    u0: float
    k: int
    h: float
    canonical: CanonicalParameter
    U_table: np.ndarray
    U_of_s: PchipInterpolator
    U_jet: Jet  # jet of U at s = 0
    phi_nodes: np.ndarray
    phi_table: np.ndarray
    phi_of_u: PchipInterpolator
    max_low_derivative: float  # max |U^(i)(0)|, 1 <= i <= k

    @property
    def u_table(self):
        return self.canonical.u_table

    @property
    def s_table(self):
        return self.canonical.s_table

    def s_of_u(self, u):
        return float(self.canonical.s_of_u(u))

    def u_of_s(self, s):
        return float(self.canonical.u_of_s(s))

    def to_dict(self):
        return {
            "u0": self.u0,
            "k": self.k,
            "h": self.h,
            "u": [float(v) for v in self.u_table],
            "s": [float(v) for v in self.s_table],
            "U": [float(v) for v in self.U_table],
            "phi_u": [float(v) for v in self.phi_nodes],
            "phi": [float(v) for v in self.phi_table],
            "max_low_derivative": self.max_low_derivative,
        }


def natural_coordinates(inp: HelicoidalInput, u0, k, n_tab=DEFAULT_TABULATION, quad_tol=QUAD_TOL):
    return _natural_coordinates(inp.profile, inp.h, inp.interval, u0, k, n_tab, quad_tol)


def _natural_coordinates(profile, h, interval, u0, k, n_tab=DEFAULT_TABULATION, quad_tol=QUAD_TOL):
    report = _check_generic(profile, u0, k)
    if not report.ok:
        raise ValueError("not a generic singular point: " + "; ".join(report.failures))
    lo, hi = interval

    phi_nodes = np.unique(np.concatenate([np.linspace(lo, hi, n_tab), [u0]]))
    if h == 0.0:
        phi_table = np.zeros_like(phi_nodes)
    else:
        def phi_integrand(u):
            return h * profile.z_dot(u) / (profile.x_value(u) ** 2 + h**2)

        cumulative = np.array(integrate_cumulative(phi_integrand, [float(v) for v in phi_nodes], quad_tol))
        at_u0 = float(cumulative[int(np.argmin(np.abs(phi_nodes - u0)))])
        phi_table = cumulative - at_u0
    phi_of_u = PchipInterpolator(phi_nodes, phi_table)

    def sheared_speed(u):
        x = profile.x_value(u)
        xd = profile.x_dot(u)
        zd = profile.z_dot(u)
        return math.sqrt(xd**2 + zd**2 * x**2 / (x**2 + h**2))

    order = 2 * k + 12
    xj = profile.x_jet(u0, order + 1)
    zj = profile.z_jet(u0, order + 1)
    xd_j = xj.differentiate()
    zd_j = zj.differentiate()
    x_sq = (xj * xj).truncated(order)
    speed_sq_jet = xd_j * xd_j + zd_j * zd_j * x_sq / (x_sq + h**2)

    canonical = canonical_from_speed(sheared_speed, speed_sq_jet, u0, k, interval, n_tab)

    x_values = np.array([profile.x_value(float(u)) for u in canonical.u_table])
    U_table = np.sqrt(x_values**2 + h**2)
    U_of_s = PchipInterpolator(canonical.s_table, U_table)

    xu_jet = jet_compose(xj.truncated(canonical.u_jet.order), canonical.u_jet)
    U_jet = jet_sqrt(xu_jet * xu_jet + h**2)
    max_low = max((abs(U_jet.derivative_value(i)) for i in range(1, k + 1)), default=0.0)

    return NaturalChart(
        u0=u0, k=k, h=h, canonical=canonical,
        U_table=U_table, U_of_s=U_of_s, U_jet=U_jet,
        phi_nodes=phi_nodes, phi_table=phi_table, phi_of_u=phi_of_u,
        max_low_derivative=max_low,
    )


@dataclass
class RoundtripReport:
    sup_error_U: float
    sup_error_metric: float
    m_hat: float
    chart: NaturalChart

    def to_dict(self):
        return {
            "sup_error_U": self.sup_error_U,
            "sup_error_metric": self.sup_error_metric,
            "m_hat": self.m_hat,
        }


def roundtrip(data: EdgeData, s_probe=None, n_tab=DEFAULT_TABULATION, quad_tol=QUAD_TOL):
    """Rebuild natural coordinates from the datum's own surface.

    The recovered metric function sqrt(x^2 + h^2) must be m * U; the report
    compares it (normalized by the recovered m) against the original U, and
    checks the recovered metric coefficients against s^(2k) and U(s)^2.
    Requires 0 in the interior of J (the chart tabulates on both sides of
    the singular curve).
    """
    profile = BourProfile(data, quad_tol)
    chart = _natural_coordinates(profile, data.h, data.J, 0.0, data.k, n_tab, quad_tol)
    u0_val = data.u_value(0.0)
    m_hat = float(chart.U_of_s(0.0)) / u0_val

    s_lo, s_hi = float(chart.s_table[0]), float(chart.s_table[-1])
    if s_probe is None:
        s_probe = np.linspace(0.98 * s_lo, 0.98 * s_hi, 101)
    sup_u = 0.0
    for sp in s_probe:
        sp = float(sp)
        if sp < s_lo or sp > s_hi:
            continue
        sup_u = max(sup_u, abs(float(chart.U_of_s(sp)) / m_hat - data.u_value(sp)))

    dsdu_interp = chart.canonical.s_of_u.derivative()
    sup_metric = 0.0
    for u, s, U_rec in zip(chart.u_table, chart.s_table, chart.U_table):
        u, s = float(u), float(s)
        if s < s_lo * 0.98 or s > s_hi * 0.98:
            continue
        g_rec = (U_rec / m_hat) ** 2
        sup_metric = max(sup_metric, abs(g_rec - data.u_value(s) ** 2))
        if abs(u) > 1e-3:
            def _sheared(uu):
                x = profile.x_value(uu)
                return math.sqrt(
                    profile.x_dot(uu) ** 2
                    + profile.z_dot(uu) ** 2 * x**2 / (x**2 + data.h**2)
                )
            e_rec = (_sheared(u) / float(dsdu_interp(u))) ** 2
            sup_metric = max(sup_metric, abs(e_rec - s ** (2 * data.k)))
    return RoundtripReport(sup_error_U=sup_u, sup_error_metric=sup_metric, m_hat=m_hat, chart=chart)


def second_pass_chart(data: EdgeData, chart: NaturalChart, n_tab=DEFAULT_TABULATION, quad_tol=QUAD_TOL):
    """Extract natural coordinates again, from the recovered parametrization.

    The chart's s is already canonical, so the second extraction should be a
    fixed point up to tabulation error; used by the stability tests.
    """
    base = BourProfile(data, quad_tol)
    prof2 = ReparamProfile(base, chart.canonical)
    interval2 = (float(chart.s_table[0]), float(chart.s_table[-1]))
    return _natural_coordinates(prof2, data.h, interval2, 0.0, data.k, n_tab, quad_tol)
