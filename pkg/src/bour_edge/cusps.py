"""Plane-curve cusp classification, canonical parameters, and edge types.

The classifier decides among 3/2, 5/2, 7/2, 4/3 and 5/3 cusps from the
derivative vectors of a plane curve at a singular point. Every decision is an
exact zero/sign test in theory; numerically each quantity is compared against
a band tol * scale^d where d is its homogeneity degree in the curve (so the
classification is invariant under scaling the curve).

Decision tree at a singular point (gamma' = 0):

    gamma'' != 0:
        det(gamma'', gamma''') != 0                          -> 3/2
        else gamma''' = c1 gamma'';
        det(gamma'', 3 gamma^(5) - 10 c1 gamma^(4)) != 0     -> 5/2
        else gamma^(5) - (10/3) c1 gamma^(4) = c2 gamma'';
        det(gamma'', gamma^(7) - 7 c1 gamma^(6)
                     - (7 c2 - (70/3) c1^3) gamma^(4)) != 0  -> 7/2
    gamma'' = 0, gamma''' != 0:
        det(gamma''', gamma^(4)) != 0                        -> 4/3
        else det(gamma''', gamma^(5)) != 0                   -> 5/3

Anything else is reported as undetermined rather than guessed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import bour
from .errors import NotDiffeo, UnsupportedK, WrongMultiplicity
from .expr import SmoothFn
from .jets import (
    Jet,
    jet_compose,
    jet_divide_by_power,
    jet_eval,
    jet_invert,
    jet_pow_real,
    jet_sqrt,
)
from .profile import EdgeData
from .quadrature import integrate_cumulative

DEFAULT_TOL = 1e-8

TAG_32 = "3/2"
TAG_52 = "5/2"
TAG_72 = "7/2"
TAG_43 = "4/3"
TAG_53 = "5/3"
TAG_REGULAR = "regular"
TAG_UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class CuspType:
    tag: str
    witnesses: dict

    def to_dict(self):
        return {"tag": self.tag, "witnesses": dict(self.witnesses)}


@dataclass(frozen=True)
class PlaneCurveJet:
    x: Jet
    y: Jet

    def __post_init__(self):
        if self.x.base != self.y.base:
            raise ValueError("component jets must share a base point")
        if self.x.order != self.y.order:
            raise ValueError("component jets must share an order")

    @property
    def base(self):
        return self.x.base

    @property
    def order(self):
        return self.x.order

    def derivative(self, j):
        return np.array([self.x.derivative_value(j), self.y.derivative_value(j)])

    @staticmethod
    def from_functions(fx: SmoothFn, fy: SmoothFn, base=0.0, order=7):
        return PlaneCurveJet(jet_eval(fx, base, order), jet_eval(fy, base, order))


def _det2(a, b):
    return float(a[0] * b[1] - a[1] * b[0])


def classify_plane_cusp(curve: PlaneCurveJet, tol=DEFAULT_TOL) -> CuspType:
    if curve.order < 7:
        raise ValueError("classification needs jets of order at least 7")
    d = [curve.derivative(j) for j in range(8)]
    scale = max(float(np.max(np.abs(v))) for v in d[1:])
    scale = max(scale, 1e-300)

    def vec_zero(v):
        return float(np.max(np.abs(v))) <= tol * scale

    def det_zero(x):
        return abs(x) <= tol * scale * scale

    if not vec_zero(d[1]):
        return CuspType(TAG_REGULAR, {"gamma1_norm": float(np.max(np.abs(d[1])))})

    if not vec_zero(d[2]):
        det_32 = _det2(d[2], d[3])
        if not det_zero(det_32):
            return CuspType(TAG_32, {"det_32": det_32})
        c1 = float(d[3] @ d[2] / (d[2] @ d[2]))
        det_52 = _det2(d[2], 3.0 * d[5] - 10.0 * c1 * d[4])
        if not det_zero(det_52):
            return CuspType(TAG_52, {"det_32": det_32, "c1": c1, "det_52": det_52})
        c2 = float((d[5] - (10.0 / 3.0) * c1 * d[4]) @ d[2] / (d[2] @ d[2]))
        det_72 = _det2(d[2], d[7] - 7.0 * c1 * d[6] - (7.0 * c2 - (70.0 / 3.0) * c1**3) * d[4])
        if not det_zero(det_72):
            return CuspType(
                TAG_72,
                {"det_32": det_32, "c1": c1, "det_52": det_52, "c2": c2, "det_72": det_72},
            )
        return CuspType(
            TAG_UNDETERMINED,
            {"det_32": det_32, "c1": c1, "det_52": det_52, "c2": c2, "det_72": det_72},
        )

    if not vec_zero(d[3]):
        det_43 = _det2(d[3], d[4])
        if not det_zero(det_43):
            return CuspType(TAG_43, {"det_43": det_43})
        det_53 = _det2(d[3], d[5])
        if not det_zero(det_53):
            return CuspType(TAG_53, {"det_43": det_43, "det_53": det_53})
        return CuspType(TAG_UNDETERMINED, {"det_43": det_43, "det_53": det_53})

    return CuspType(TAG_UNDETERMINED, {"note": "multiplicity exceeds 3"})


def reparametrize_curve(curve: PlaneCurveJet, phi: SmoothFn, tol=DEFAULT_TOL):
    """Jet of gamma(phi(.)) at the same base; phi must fix the base point."""
    phi_jet = jet_eval(phi, curve.base, curve.order)
    if abs(phi_jet.coeffs[0] - curve.base) > 1e-9 * max(1.0, abs(curve.base)):
        raise ValueError(f"phi({curve.base!r}) = {phi_jet.coeffs[0]!r} does not fix the base point")
    if abs(phi_jet.coeffs[1]) < tol:
        raise NotDiffeo(f"phi'({curve.base!r}) = {phi_jet.coeffs[1]!r} is too small")
    return PlaneCurveJet(jet_compose(curve.x, phi_jet), jet_compose(curve.y, phi_jet)), phi_jet


def reparam_invariance_check(curve: PlaneCurveJet, phi: SmoothFn, tol=DEFAULT_TOL):
    """Classify a curve and its reparametrization by phi.

    Returns (original CuspType, reparametrized CuspType, derived_c1) where
    derived_c1 = c1 phi'(0) + 3 phi''(0)/phi'(0) predicts the reparametrized
    curve's c1 from the original one.
    """
    reparam, phi_jet = reparametrize_curve(curve, phi, tol)
    original = classify_plane_cusp(curve, tol)
    transformed = classify_plane_cusp(reparam, tol)
    c1 = original.witnesses.get("c1")
    if c1 is None:
        d2 = curve.derivative(2)
        d3 = curve.derivative(3)
        denom = float(d2 @ d2)
        c1 = float(d3 @ d2 / denom) if denom > 0.0 else math.nan
    p1 = phi_jet.derivative_value(1)
    p2 = phi_jet.derivative_value(2)
    derived_c1 = c1 * p1 + 3.0 * p2 / p1
    return original, transformed, derived_c1


@dataclass
class CanonicalParameter:
    """Tabulated parameter s(u) with |dgamma/ds| = |s|^k near a singular point."""

    u0: float
    k: int
    u_table: np.ndarray
    s_table: np.ndarray
    s_of_u: PchipInterpolator
    u_of_s: PchipInterpolator
    dsdu_of_u: PchipInterpolator
    s_jet: Jet  # jet of s(u) at u0
    u_jet: Jet  # jet of the inverse u(s) at 0

    def __call__(self, u):
        return float(self.s_of_u(u))

    def inverse(self, s):
        return float(self.u_of_s(s))


_JET_BAND = 1e-3


def canonical_from_speed(speed, speed_sq_jet, u0, k, interval, n_samples=512):
    """Canonical parameter from the speed function |gamma'|.

    ``speed`` is a callable; ``speed_sq_jet`` is the jet of speed^2 at u0,
    which must vanish to order exactly 2k. The construction integrates the
    speed from u0 and takes the (k+1)-st root:

        s(u) = sign(u - u0) ((k+1) |int_u0^u speed|)^(1/(k+1)).

    Inside a small band around u0 the integral comes from jets (the direct
    quadrature loses digits there); the two branches are stitched at the
    band edge.
    """
    lo, hi = interval
    if not (lo < u0 < hi):
        raise ValueError(f"u0 = {u0!r} must be interior to {interval!r}")
    w_jet = Jet(u0, jet_divide_by_power(Jet(0.0, speed_sq_jet.coeffs), 2 * k, tol=math.inf).coeffs)
    if w_jet.coeffs[0] <= 0.0:
        raise WrongMultiplicity(
            f"speed^2 does not vanish to order exactly {2 * k} at u0 = {u0!r}"
        )
    # Smooth signed speed (u-u0)^k sqrt(w); its antiderivative A satisfies
    # |A| = |int_u0^u speed| on both sides of u0.
    sq = jet_sqrt(w_jet)
    a_jet = Jet(u0, (0.0,) * k + sq.coeffs).antiderivative()
    b_jet = Jet(u0, jet_divide_by_power(Jet(0.0, a_jet.coeffs), k + 1, tol=math.inf).coeffs)
    s_jet = Jet(u0, (0.0, 1.0) + (0.0,) * (b_jet.order - 1)) * jet_pow_real(
        (k + 1.0) * b_jet, 1.0 / (k + 1.0)
    )
    u_jet = jet_invert(s_jet)
    ds_jet = s_jet.differentiate()

    band = min(_JET_BAND, 0.25 * (hi - u0), 0.25 * (u0 - lo))
    right_nodes = [float(u) for u in np.linspace(u0, hi, max(2, n_samples // 2)) if u > u0 + band]
    left_nodes = [float(u) for u in np.linspace(u0, lo, max(2, n_samples // 2)) if u < u0 - band]
    a_right = integrate_cumulative(speed, [u0 + band] + right_nodes)[1:]
    a_left = integrate_cumulative(speed, [u0 - band] + left_nodes)[1:]
    a_edge_right = abs(a_jet(u0 + band))
    a_edge_left = abs(a_jet(u0 - band))

    entries = []  # (u, |A(u)|, from_jet)
    for u, a in zip(left_nodes, a_left):
        entries.append((u, a_edge_left + abs(a), False))
    for u in np.linspace(u0 - band, u0 + band, 65):
        entries.append((float(u), abs(a_jet(float(u))), True))
    for u, a in zip(right_nodes, a_right):
        entries.append((u, a_edge_right + a, False))
    entries.sort(key=lambda e: e[0])

    us, ss, ds = [], [], []
    for u, a_abs, from_jet in entries:
        if us and u - us[-1] < 1e-13 * (hi - lo):
            continue
        us.append(u)
        if from_jet:
            ss.append(s_jet(u))
            ds.append(ds_jet(u))
        else:
            ss.append(math.copysign(((k + 1.0) * a_abs) ** (1.0 / (k + 1.0)), u - u0))
            ds.append(((k + 1.0) * a_abs) ** (-k / (k + 1.0)) * speed(u))
    u_table = np.array(us)
    s_table = np.array(ss)
    s_of_u = PchipInterpolator(u_table, s_table)
    u_of_s = PchipInterpolator(s_table, u_table)
    dsdu_of_u = PchipInterpolator(u_table, np.array(ds))
    return CanonicalParameter(
        u0=u0, k=k, u_table=u_table, s_table=s_table, s_of_u=s_of_u,
        u_of_s=u_of_s, dsdu_of_u=dsdu_of_u, s_jet=s_jet, u_jet=u_jet,
    )


def canonical_parameter(curve, u0, k, interval, n_samples=512, tol=DEFAULT_TOL):
    """Canonical parameter for a curve given as a sequence of SmoothFn.

    The curve must have multiplicity k+1 at u0 (its first k derivatives
    vanish there, the (k+1)-st does not); WrongMultiplicity otherwise.
    """
    comps = list(curve)
    n = k + 1
    jets = [jet_eval(f, u0, 16) for f in comps]
    derivs = [np.array([j.derivative_value(i) for j in jets]) for i in range(2 * k + 4)]
    scale = max(float(np.max(np.abs(v))) for v in derivs[1:])
    scale = max(scale, 1e-300)
    for i in range(1, n):
        if float(np.max(np.abs(derivs[i]))) > tol * scale:
            raise WrongMultiplicity(
                f"derivative {i} does not vanish at u0 = {u0!r}: {derivs[i]!r}"
            )
    if float(np.max(np.abs(derivs[n]))) <= tol * scale:
        raise WrongMultiplicity(f"derivative {n} vanishes at u0 = {u0!r}")

    def speed(u):
        acc = 0.0
        for f in comps:
            acc += jet_eval(f, u, 1).coeffs[1] ** 2
        return math.sqrt(acc)

    djets = [j.differentiate() for j in jets]
    speed_sq_jet = None
    for dj in djets:
        term = dj * dj
        speed_sq_jet = term if speed_sq_jet is None else speed_sq_jet + term
    return canonical_from_speed(speed, speed_sq_jet, u0, k, interval, n_samples)


# Decisive derivative orders of U for each edge family, in test order.
_EDGE_RULES = {
    1: ((3, TAG_32), (5, TAG_52), (7, TAG_72)),
    2: ((4, TAG_43), (5, TAG_53)),
}


def classify_edge(data: EdgeData, tol=DEFAULT_TOL) -> CuspType:
    """Edge type of a datum from the U-derivatives at 0 (k in {1, 2})."""
    if data.k not in _EDGE_RULES:
        raise UnsupportedK(f"edge classification is only available for k in (1, 2), got {data.k}")
    u_jet = data.u_jet(8)
    derivs = {j: u_jet.derivative_value(j) for j in range(8)}
    scale = max(max(abs(v) for v in derivs.values()), 1e-300)
    witnesses = {}
    for order, tag in _EDGE_RULES[data.k]:
        value = derivs[order]
        witnesses[f"U{order}"] = value
        if abs(value) > tol * scale:
            return CuspType(tag, witnesses)
    return CuspType(TAG_UNDETERMINED, witnesses)


def profile_curve_jet(data: EdgeData, order=7) -> PlaneCurveJet:
    """Jet at s = 0 of the profile curve (x(s), z(s)) of the datum."""
    bundle = bour._series_bundle(data, order)
    return PlaneCurveJet(bundle[3].truncated(order), bundle[4].truncated(order))


def classify_edge_via_profile(data: EdgeData, tol=DEFAULT_TOL) -> CuspType:
    """Independent edge classification through the profile-curve cusp."""
    return classify_plane_cusp(profile_curve_jet(data), tol)
