"""Evaluation of the Bour representation of a helicoidal n-type edge.

For a datum {U, h, m, eps0, eps1, eps2, k} the surface is

    Psi(s, t) = (x(s) cos theta(s,t), x(s) sin theta(s,t), z(s) + h theta(s,t))

    x(s)       = eps0 sqrt(m^2 U^2 - h^2)
    z(s)       = eps2 m   int_0^s  w^k U(w) rho(w) / (m^2 U(w)^2 - h^2) dw
    theta(s,t) = (eps1 t - eps2 h int_0^s w^k rho(w) / (U(w) (m^2 U(w)^2 - h^2)) dw) / m

The singular curve is s = 0 and the first fundamental form is
E = s^(2k), F = 0, G = U(s)^2. The integrals are evaluated by adaptive
Gauss-Kronrod quadrature away from 0 and by term-wise integrated jets inside
a small band around 0, where tiny integration ranges would otherwise cancel.
"""

from __future__ import annotations

import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import quadrature
from ._fmt import fmt17
from ._version import __version__
from .errors import NegativeRadicand
from .jets import Jet, jet_eval, jet_sin_cos, jet_sqrt
from .profile import EdgeData, rho

# Pointwise evaluation switches to truncated jets inside this radius.
NEAR_ZERO_RADIUS = 1e-4
_NEAR_ZERO_JET_ORDER = 16

# A grid row is marked singular when |s| falls under this threshold.
SINGULAR_EPS = 1e-13

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class SurfacePoint:
    position: tuple
    s: float
    t: float
    singular: bool


@dataclass(frozen=True)
class FundamentalForm:
    E: float
    F: float
    G: float


@dataclass
class Mesh:
    s_values: np.ndarray
    t_values: np.ndarray
    positions: np.ndarray  # (rows, cols, 3)
    singular_row: int | None
    datum: EdgeData

    @property
    def rows(self):
        return len(self.s_values)

    @property
    def cols(self):
        return len(self.t_values)

    def point(self, r, c):
        s = float(self.s_values[r])
        return SurfacePoint(
            position=tuple(float(v) for v in self.positions[r, c]),
            s=s,
            t=float(self.t_values[c]),
            singular=abs(s) < SINGULAR_EPS,
        )


def x_radicand(data: EdgeData, s):
    u = data.u_value(s)
    return data.m**2 * u**2 - data.h**2


def x_of_s(data: EdgeData, s):
    """x(s) = eps0 sqrt(m^2 U^2 - h^2); never zero on a valid datum."""
    r = x_radicand(data, s)
    if r <= 0.0:
        raise NegativeRadicand(
            f"m^2 U^2 - h^2 = {r!r} at s = {s!r}", location=s, value=r
        )
    return data.eps0 * math.sqrt(r)


def _z_integrand(data):
    def f(w):
        u = data.u_value(w)
        return w**data.k * u * rho(data, w) / (data.m**2 * u**2 - data.h**2)
    return f


def _theta_integrand(data):
    def f(w):
        u = data.u_value(w)
        return w**data.k * rho(data, w) / (u * (data.m**2 * u**2 - data.h**2))
    return f


@lru_cache(maxsize=256)
def _series_bundle(data: EdgeData, order):
    """Jets at s = 0 of all s-dependent pieces, to the given order."""
    u_j = data.u_jet(order + data.k + 1)
    v_j = data.v_jet.truncated(order)
    u_j = u_j.truncated(order)
    m, h = data.m, data.h
    denom_j = m**2 * (u_j * u_j) - h**2
    rho_j = jet_sqrt(denom_j - m**4 * (u_j * u_j) * (v_j * v_j))
    x_j = data.eps0 * jet_sqrt(denom_j)
    s_pow = Jet(0.0, (0.0,) * data.k + (1.0,) + (0.0,) * (order - data.k))
    zp_j = data.eps2 * m * (s_pow * u_j * rho_j / denom_j)
    z_j = zp_j.antiderivative().truncated(order)
    ip_j = s_pow * rho_j / (u_j * denom_j)
    i_j = ip_j.antiderivative().truncated(order)
    return u_j, v_j, rho_j, x_j, z_j, i_j


def z_of_s(data: EdgeData, s, tol=DEFAULT_TOL):
    """z(s) by adaptive quadrature from 0; exact 0 at s = 0."""
    if s == 0.0:
        return 0.0
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if abs(s) < NEAR_ZERO_RADIUS:
        z_j = _series_bundle(data, _NEAR_ZERO_JET_ORDER)[4]
        return z_j(s)
    val, _ = quadrature.integrate(_z_integrand(data), 0.0, s, tol / data.m)
    return data.eps2 * data.m * val


def _theta_integral(data: EdgeData, s, tol):
    """int_0^s w^k rho / (U (m^2 U^2 - h^2)), the t-independent part of theta.

    For h = 0 the caller scales this by h, so 0 is returned without
    integrating.
    """
    if s == 0.0 or data.h == 0.0:
        return 0.0
    if abs(s) < NEAR_ZERO_RADIUS:
        i_j = _series_bundle(data, _NEAR_ZERO_JET_ORDER)[5]
        return i_j(s)
    tol_int = tol * data.m / max(abs(data.h), 1.0)
    val, _ = quadrature.integrate(_theta_integrand(data), 0.0, s, tol_int)
    return val


def theta(data: EdgeData, s, t, tol=DEFAULT_TOL):
    """theta(s, t); reduces to eps1 t / m at s = 0 and for h = 0."""
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    integral = _theta_integral(data, s, tol)
    return (data.eps1 * t - data.eps2 * data.h * integral) / data.m


def _assemble(data, s, t, x, z, theta_int):
    th = (data.eps1 * t - data.eps2 * data.h * theta_int) / data.m
    return (
        x * math.cos(th),
        x * math.sin(th),
        z + data.h * th,
    )


def psi(data: EdgeData, s, t, tol=DEFAULT_TOL):
    """The surface point Psi(s, t)."""
    x = x_of_s(data, s)
    z = z_of_s(data, s, tol)
    integral = _theta_integral(data, s, tol)
    return SurfacePoint(
        position=_assemble(data, s, t, x, z, integral),
        s=s,
        t=t,
        singular=abs(s) < SINGULAR_EPS,
    )


def psi_jet_at_zero(data: EdgeData, t, order):
    """Jets in s at s = 0 of the three components of Psi(., t).

    Computed by term-wise integration of the integrand jets; no quadrature.
    """
    work = order + 2
    u_j, v_j, rho_j, x_j, z_j, i_j = _series_bundle(data, work)
    theta_j = (data.eps1 * t - data.eps2 * data.h * i_j) * (1.0 / data.m)
    sin_j, cos_j = jet_sin_cos(theta_j)
    p1 = x_j * cos_j
    p2 = x_j * sin_j
    p3 = z_j + data.h * theta_j
    return p1.truncated(order), p2.truncated(order), p3.truncated(order)


def first_fundamental_form(data: EdgeData, s, t):
    """E, F, G from closed-form first derivatives of the representation.

    The contract E = s^(2k), F = 0, G = U(s)^2 is what tests verify; here the
    coefficients are assembled from x', z', theta_s, theta_t without assuming
    that identity.
    """
    u = data.u_value(s)
    up = jet_eval(data.U, s, 1).coeffs[1]
    xr = x_radicand(data, s)
    if xr <= 0.0:
        raise NegativeRadicand(f"m^2 U^2 - h^2 = {xr!r} at s = {s!r}", location=s, value=xr)
    x = data.eps0 * math.sqrt(xr)
    r = rho(data, s)
    m, h, k = data.m, data.h, data.k
    xprime = m**2 * u * up / x
    zprime = data.eps2 * m * s**k * u * r / xr
    theta_s = -data.eps2 * h * s**k * r / (m * u * xr)
    theta_t = data.eps1 / m
    zh = zprime + h * theta_s
    E = xprime**2 + xr * theta_s**2 + zh**2
    F = theta_t * (xr * theta_s + h * zh)
    G = theta_t**2 * (xr + h**2)
    return FundamentalForm(E=E, F=F, G=G)


def _worker_count():
    raw = os.environ.get("BOUR_EDGE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _snap_zero_row(values):
    """Force the grid value closest to 0 to be exactly 0; returns its index."""
    idx = int(np.argmin(np.abs(values)))
    values[idx] = 0.0
    return idx


def sample_mesh(data: EdgeData, s_range=None, t_range=None, rows=60, cols=60, tol=DEFAULT_TOL):
    """Sampled surface grid; contains the exact s = 0 row when 0 is in range."""
    if rows < 2 or cols < 2:
        raise ValueError("rows and cols must be at least 2")
    lo, hi = s_range if s_range is not None else data.J
    if lo < data.J[0] - 1e-12 or hi > data.J[1] + 1e-12:
        raise ValueError(f"s_range {s_range!r} exceeds the datum domain {data.J!r}")
    if t_range is None:
        t_range = (0.0, 2.0 * math.pi * data.m)
    s_values = np.linspace(lo, hi, rows)
    singular_row = None
    if lo <= 0.0 <= hi:
        singular_row = _snap_zero_row(s_values)
    t_values = np.linspace(t_range[0], t_range[1], cols)

    def row_positions(r):
        s = float(s_values[r])
        x = x_of_s(data, s)
        z = z_of_s(data, s, tol)
        integral = _theta_integral(data, s, tol)
        out = np.empty((len(t_values), 3))
        for c, t in enumerate(t_values):
            out[c] = _assemble(data, s, float(t), x, z, integral)
        return out

    workers = _worker_count()
    positions = np.empty((rows, cols, 3))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for r, block in enumerate(pool.map(row_positions, range(rows))):
                positions[r] = block
    else:
        for r in range(rows):
            positions[r] = row_positions(r)
    return Mesh(s_values=s_values, t_values=t_values, positions=positions,
                singular_row=singular_row, datum=data)


def write_obj(mesh: Mesh, target):
    """OBJ export: vertices in row-major order, quad faces, datum header."""
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w") as fh:
            write_obj(mesh, fh)
        return
    out: io.TextIOBase = target
    out.write(f"# bour-edge {__version__} datum={mesh.datum.to_json()}\n")
    rows, cols = mesh.rows, mesh.cols
    for r in range(rows):
        for c in range(cols):
            x, y, z = mesh.positions[r, c]
            out.write(f"v {fmt17(float(x))} {fmt17(float(y))} {fmt17(float(z))}\n")
    for r in range(rows - 1):
        for c in range(cols - 1):
            a = r * cols + c + 1
            b = a + 1
            d = a + cols
            e = d + 1
            out.write(f"f {a} {b} {e} {d}\n")


def write_form_csv(data: EdgeData, s_values, t_values, target):
    """CSV dump of the first fundamental form with columns s,t,E,F,G."""
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w") as fh:
            write_form_csv(data, s_values, t_values, fh)
        return
    out: io.TextIOBase = target
    out.write("s,t,E,F,G\n")
    for s in s_values:
        for t in t_values:
            form = first_fundamental_form(data, float(s), float(t))
            out.write(
                f"{fmt17(float(s))},{fmt17(float(t))},"
                f"{fmt17(form.E)},{fmt17(form.F)},{fmt17(form.G)}\n"
            )
