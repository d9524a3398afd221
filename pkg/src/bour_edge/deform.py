"""Isometric deformation families, invariant inversion, isomers.

Every valid (h, m) with the same U, k and signs yields a surface with the
same first fundamental form; the pair psi(h, m) = (kappa_nu, kappa_t) moves
diffeomorphically over the admissible region, with Jacobian determinant
1 / (m^3 rho(0) U(0)^2). Inverting psi is a damped 2x2 Newton iteration with
the analytic Jacobian; steps are halved until the radicand at s = 0 stays
positive, and the solution is re-validated on all of J.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import bour, cusps, invariants
from ._fmt import fmt17
from .errors import BourEdgeError, NoConvergence, StarViolation
from .profile import EdgeData, make_edge_data, rho

METRIC_SAMPLE_COUNT = 50
METRIC_SEED = 20260809


@dataclass(frozen=True)
class FamilyMember:
    h: float
    m: float
    valid: bool
    data: EdgeData | None
    metric_deviation: float | None  # max |delta E| + |delta F| + |delta G| vs base


@dataclass(frozen=True)
class DeformationFamily:
    base: EdgeData
    members: tuple

    def valid_members(self):
        return [mem for mem in self.members if mem.valid]


def _metric_sample_points(data, count=METRIC_SAMPLE_COUNT):
    rng = np.random.default_rng(METRIC_SEED)
    lo, hi = data.J
    ss = rng.uniform(0.9 * lo, 0.9 * hi, count)
    ts = rng.uniform(0.0, 2.0 * math.pi, count)
    return list(zip(ss, ts))


def metric_deviation(a: EdgeData, b: EdgeData, points=None):
    """max over sample points of |dE| + |dF| + |dG| between two data."""
    if points is None:
        points = _metric_sample_points(a)
    worst = 0.0
    for s, t in points:
        fa = bour.first_fundamental_form(a, float(s), float(t))
        fb = bour.first_fundamental_form(b, float(s), float(t))
        worst = max(worst, abs(fa.E - fb.E) + abs(fa.F - fb.F) + abs(fa.G - fb.G))
    return worst


def _sibling(data, h, m):
    return make_edge_data(
        U=data.U, h=h, m=m, eps0=data.eps0, eps1=data.eps1, eps2=data.eps2,
        k=data.k, J=data.J,
    )


def deformation_family(data: EdgeData, h_span, m_span, nh, nm) -> DeformationFamily:
    """Validity grid of (h, m) around the base, with metric checks.

    h runs over base.h +- h_span and m over base.m +- m_span (clipped to
    m > 0); invalid combinations are kept in the grid with valid=False.
    """
    points = _metric_sample_points(data)
    members = []
    hs = np.linspace(data.h - h_span, data.h + h_span, nh)
    ms = np.linspace(max(data.m - m_span, 1e-6), data.m + m_span, nm)
    for h in hs:
        for m in ms:
            try:
                member = _sibling(data, float(h), float(m))
            except BourEdgeError:
                members.append(FamilyMember(float(h), float(m), False, None, None))
                continue
            dev = metric_deviation(data, member, points)
            members.append(FamilyMember(float(h), float(m), True, member, dev))
    return DeformationFamily(base=data, members=tuple(members))


def invariant_map(data: EdgeData):
    """(kappa_nu, kappa_t) of the datum."""
    return invariants.kappa_nu(data), invariants.kappa_t(data)


def jacobian_det(data: EdgeData):
    """Closed-form Jacobian determinant of (h, m) -> (kappa_nu, kappa_t)."""
    u0 = data.u_value(0.0)
    return 1.0 / (data.m**3 * rho(data, 0.0) * u0**2)


def jacobian_fd(data: EdgeData, step=1e-5):
    """Finite-difference determinant of the same map, for cross-checking."""
    u0 = data.u_value(0.0)
    v0 = data.v_jet.coeffs[0]

    def psi(h, m):
        radicand = m**2 * u0**2 - h**2 - m**4 * u0**2 * v0**2
        return np.array([math.sqrt(radicand) / (m**2 * u0**2), h / (m**2 * u0**2)])

    h0, m0 = data.h, data.m
    col_h = (psi(h0 + step, m0) - psi(h0 - step, m0)) / (2 * step)
    col_m = (psi(h0, m0 + step) - psi(h0, m0 - step)) / (2 * step)
    return float(np.linalg.det(np.column_stack([col_h, col_m])))


def _psi_and_jacobian(u0, v0, h, m):
    radicand = m**2 * u0**2 - h**2 - m**4 * u0**2 * v0**2
    if radicand <= 0.0:
        return None, None
    r = math.sqrt(radicand)
    kn = r / (m**2 * u0**2)
    kt = h / (m**2 * u0**2)
    dkn_dh = -h / (r * m**2 * u0**2)
    dkn_dm = (1.0 - 2.0 * m**2 * v0**2) / (m * r) - 2.0 * r / (m**3 * u0**2)
    dkt_dh = 1.0 / (m**2 * u0**2)
    dkt_dm = -2.0 * h / (m**3 * u0**2)
    return np.array([kn, kt]), np.array([[dkn_dh, dkn_dm], [dkt_dh, dkt_dm]])


@dataclass(frozen=True)
class InversionResult:
    h: float
    m: float
    data: EdgeData
    iterations: int
    residual: float


def invert_invariants(data0: EdgeData, target, tol=1e-12, max_iterations=50) -> InversionResult:
    """Solve (kappa_nu, kappa_t)(h, m) = target by damped Newton from data0.

    Raises NoConvergence if the iteration stalls, StarViolation if the
    solution fails admissibility on all of J.
    """
    u0 = data0.u_value(0.0)
    v0 = data0.v_jet.coeffs[0]
    target = np.asarray(target, dtype=float)
    h, m = data0.h, data0.m
    psi, jac = _psi_and_jacobian(u0, v0, h, m)
    if psi is None:
        raise StarViolation("starting datum has non-positive radicand at 0")
    for iteration in range(max_iterations):
        residual = psi - target
        if float(np.max(np.abs(residual))) < tol:
            solved = _sibling(data0, h, m)  # re-validates the star condition on J
            return InversionResult(h=h, m=m, data=solved, iterations=iteration,
                                   residual=float(np.max(np.abs(residual))))
        step = np.linalg.solve(jac, -residual)
        scale = 1.0
        while scale > 1e-12:
            h_new, m_new = h + scale * step[0], m + scale * step[1]
            if m_new > 0.0:
                psi_new, jac_new = _psi_and_jacobian(u0, v0, h_new, m_new)
                if psi_new is not None:
                    break
            scale *= 0.5
        else:
            raise NoConvergence("step damping exhausted without an admissible iterate")
        h, m, psi, jac = h_new, m_new, psi_new, jac_new
    raise NoConvergence(f"no convergence after {max_iterations} Newton iterations")


@dataclass(frozen=True)
class HelixInvariants:
    radius: float
    z_advance_per_angle: float  # |dz / d theta| along the singular curve


def singular_helix_invariants(data: EdgeData) -> HelixInvariants:
    """Radius and |dz/dtheta| of the singular curve, from sampled points."""
    p0 = np.array(bour.psi(data, 0.0, 0.0).position)
    p1 = np.array(bour.psi(data, 0.0, 0.5).position)
    radius = math.hypot(p0[0], p0[1])
    dtheta = bour.theta(data, 0.0, 0.5) - bour.theta(data, 0.0, 0.0)
    dz = p1[2] - p0[2]
    return HelixInvariants(radius=radius, z_advance_per_angle=abs(dz / dtheta))


@dataclass(frozen=True)
class IsomerSet:
    variants: tuple  # four EdgeData over (eps1, eps2) in {(+,+), (+,-), (-,+), (-,-)}
    metric_deviation: float
    helix: tuple  # HelixInvariants per variant

    def variant(self, eps1, eps2):
        for member in self.variants:
            if member.eps1 == eps1 and member.eps2 == eps2:
                return member
        raise KeyError((eps1, eps2))


def isomers(data: EdgeData) -> IsomerSet:
    """The four sign variants sharing the metric and the singular helix."""
    variants = tuple(
        data.replace(eps1=e1, eps2=e2)
        for e1, e2 in ((+1, +1), (+1, -1), (-1, +1), (-1, -1))
    )
    points = _metric_sample_points(data)
    dev = max(metric_deviation(variants[0], v, points) for v in variants[1:])
    helix = tuple(singular_helix_invariants(v) for v in variants)
    return IsomerSet(variants=variants, metric_deviation=dev, helix=helix)


def revolution_path(data: EdgeData, steps) -> list:
    """Members along the linear pitch schedule h0 -> 0 (all remain valid)."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    out = []
    for h in np.linspace(data.h, 0.0, steps):
        out.append(_sibling(data, float(h), data.m))
    return out


def export_family(family: DeformationFamily, out_dir, rows=40, cols=40, tol=bour.DEFAULT_TOL):
    """One OBJ per valid member plus family.csv with the invariant summary."""
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "family.csv")
    with open(csv_path, "w") as fh:
        fh.write("h,m,valid,kappa_nu,kappa_t,edge_type\n")
        for member in family.members:
            if member.valid:
                kn, kt = invariant_map(member.data)
                tag = cusps.classify_edge(member.data).tag
                fh.write(
                    f"{fmt17(member.h)},{fmt17(member.m)},true,"
                    f"{fmt17(kn)},{fmt17(kt)},{tag}\n"
                )
                mesh = bour.sample_mesh(member.data, rows=rows, cols=cols, tol=tol)
                name = f"member_h{member.h:.6g}_m{member.m:.6g}.obj"
                bour.write_obj(mesh, os.path.join(out_dir, name))
            else:
                fh.write(f"{fmt17(member.h)},{fmt17(member.m)},false,,,\n")
    return csv_path
