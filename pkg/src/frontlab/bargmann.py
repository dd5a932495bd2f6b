"""Bargmann's integral, monotonization and the ideal-shock distance.

tau(q) is the max over split points x0 of the smaller of the two
first-moment integrals of the negative part q^- on either side of x0.
The left moment f_- grows in x0 and the right moment f_+ shrinks, so
the max-min is attained at their unique crossing; the crossing is found
from one O(N) pass of running trapezoid sums plus bisection inside the
bracketing cell with the integrand treated as linear there.

A front with tau(phi'/2) < 1 is called sharp.  The companion quantities
(monotonization M with M' = -(phi')^-, the ideal shock step S, and the
balanced L1 distance between them) realize the same number as an area.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BracketError, ConfigError, DomainError
from .profile import FrontProfile, solve_front
from .sampled import SampledFunction, cumulative_trapezoid, trapezoid

_SPLIT_TOL = 1e-10  # abscissa tolerance for all crossing bisections here


@dataclass(frozen=True)
class BargmannReport:
    """Sharpness summary for one front.

    tau and l1_distance are both expressed for the criterion potential
    q = phi'/2, so the area identity makes them agree to quadrature error.
    m_infinity, shock_offset describe the unscaled monotonization of phi.
    """

    nu: float
    tau: float
    balance_point: float | None
    m_infinity: float
    shock_offset: float
    l1_distance: float
    is_sharp: bool

    def to_dict(self) -> dict:
        return {
            "nu": self.nu,
            "tau": self.tau,
            "balance_point": self.balance_point,
            "m_infinity": self.m_infinity,
            "shock_offset": self.shock_offset,
            "l1_distance": self.l1_distance,
            "is_sharp": self.is_sharp,
        }


def negative_part(q: SampledFunction) -> SampledFunction:
    """Pointwise max(-q, 0), limits mapped the same way."""
    return SampledFunction(q.grid, np.maximum(-q.values, 0.0),
                           max(-q.left_limit, 0.0), max(-q.right_limit, 0.0))


def _bisect_cell(g_lo: float, x_lo: float, x_hi: float,
                 g_of: Callable[[float], float], tol: float) -> float:
    """Root of the increasing function g inside one bracketing cell."""
    lo, hi = x_lo, x_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g_of(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def tau(q: SampledFunction) -> tuple[float, float | None]:
    """Bargmann's integral of q and the balancing split point.

    Returns (0.0, None) when q^- vanishes identically on the grid; the
    max-min degenerates and scans over families need a total function.
    """
    x = q.grid
    h = q.spacing
    qm = np.maximum(-q.values, 0.0)
    if not np.any(qm > 0.0):
        return 0.0, None

    m0 = cumulative_trapezoid(qm, h)            # mass left of x
    m1 = cumulative_trapezoid(x * qm, h)        # first moment left of x
    M0, M1 = m0[-1], m1[-1]
    f_minus = x * m0 - m1
    f_plus = (M1 - m1) - x * (M0 - m0)
    g = f_minus - f_plus

    idx = np.flatnonzero((g[:-1] < 0.0) & (g[1:] >= 0.0))
    if idx.size == 0:
        # One-sided mass piled against a grid end; the crossing degenerates.
        i = int(np.argmax(np.minimum(f_minus, f_plus)))
        return float(min(f_minus[i], f_plus[i])), float(x[i])
    i = int(idx[0])

    # Inside the cell treat q^- as linear (trapezoid-consistent), making the
    # partial masses quadratic polynomials of the offset s = x0 - x[i].
    qa, qb = qm[i], qm[i + 1]
    slope = (qb - qa) / h

    def moments(s: float) -> tuple[float, float]:
        xa = x[i]
        dm0 = qa * s + 0.5 * slope * s * s
        # integral of t*q(t) over [xa, xa+s] with q linear
        dm1 = xa * dm0 + 0.5 * qa * s * s + slope * s ** 3 / 3.0
        return m0[i] + dm0, m1[i] + dm1

    def g_at(x0: float) -> float:
        mm0, mm1 = moments(x0 - x[i])
        fm = x0 * mm0 - mm1
        fp = (M1 - mm1) - x0 * (M0 - mm0)
        return fm - fp

    x0 = _bisect_cell(g[i], float(x[i]), float(x[i + 1]), g_at, _SPLIT_TOL)
    mm0, mm1 = moments(x0 - x[i])
    fm = x0 * mm0 - mm1
    fp = (M1 - mm1) - x0 * (M0 - mm0)
    return float(0.5 * (fm + fp)), float(x0)


def monotonize(phi: SampledFunction,
               dphi: np.ndarray | None = None) -> tuple[SampledFunction, float]:
    """Monotonization M of a front-like function and its limit amplitude.

    M is the cumulative integral of -(phi')^-, anchored symmetrically so
    that M -> +/-M_inf at the left/right grid end with
    M_inf = (1/2) * integral of (phi')^-.  Where phi decreases M follows
    phi; where phi increases M is constant.  Supply dphi when an accurate
    derivative is available; otherwise central differences are used.
    """
    x = phi.grid
    h = phi.spacing
    if dphi is None:
        dphi = np.gradient(phi.values, x)
    neg = np.maximum(-np.asarray(dphi, dtype=float), 0.0)
    c = cumulative_trapezoid(neg, h)
    m_inf = 0.5 * c[-1]
    m = m_inf - c
    return SampledFunction(x, m, m_inf, -m_inf), float(m_inf)


def shock_offset(m: SampledFunction, m_infinity: float) -> float:
    """Translate of the ideal shock balancing the areas on either side.

    Solves  integral_{-inf}^{x0} (M_inf - M) = integral_{x0}^{inf} (M_inf + M)
    by bisection on the running sums; both integrands are nonnegative for a
    non-increasing M between +/-M_inf, so the difference is monotone.
    """
    x = m.grid
    h = m.spacing
    left_int = cumulative_trapezoid(m_infinity - m.values, h)
    right_all = cumulative_trapezoid(m_infinity + m.values, h)
    right_int = right_all[-1] - right_all
    g = left_int - right_int
    if g[0] > 0.0 or g[-1] < 0.0:
        raise BracketError("area balance has no sign change on the grid")
    first_nonneg = int(np.flatnonzero(g >= 0.0)[0])
    if first_nonneg == 0:
        return float(x[0])
    i = first_nonneg - 1

    va, vb = m.values[i], m.values[i + 1]
    slope = (vb - va) / h

    def g_at(x0: float) -> float:
        s = x0 - x[i]
        seg = va * s + 0.5 * slope * s * s
        dl = m_infinity * s - seg
        dr = m_infinity * s + seg
        return (left_int[i] + dl) - (right_int[i] - dr)

    return _bisect_cell(g[i], float(x[i]), float(x[i + 1]), g_at, _SPLIT_TOL)


def l1_distance(m: SampledFunction, m_infinity: float, x0: float) -> float:
    """Half the area between M and the ideal decreasing step centered at x0.

    The step is +M_inf left of x0 and -M_inf right of it, so the integrand
    is (M_inf - M) on the left and (M_inf + M) on the right; the cell
    containing x0 is split with M linear inside it.
    """
    x = m.grid
    h = m.spacing
    v = m.values
    if x0 <= x[0]:
        return 0.5 * trapezoid(m_infinity + v, h)
    if x0 >= x[-1]:
        return 0.5 * trapezoid(m_infinity - v, h)
    i = int(np.searchsorted(x, x0) - 1)
    left = trapezoid(m_infinity - v[:i + 1], h) if i >= 1 else 0.0
    right = trapezoid(m_infinity + v[i + 1:], h) if i + 1 <= len(v) - 2 else 0.0
    s = x0 - x[i]
    slope = (v[i + 1] - v[i]) / h
    seg_lo = v[i] * s + 0.5 * slope * s * s                     # int of M over [x_i, x0]
    seg_hi = v[i] * (h - s) + 0.5 * slope * (h * h - s * s)     # int of M over [x0, x_{i+1}]
    left += m_infinity * s - seg_lo
    right += m_infinity * (h - s) + seg_hi
    return 0.5 * (left + right)


def analytic_bound_minus(phi0: float, nu: float) -> float:
    """Closed-form upper bound for the left moment of a monotone front."""
    if phi0 == -1.0:
        raise DomainError("bound has a pole at phi0 = -1")
    return -2.0 * np.log(abs((1.0 + phi0) / 2.0)) + nu / (1.0 + phi0)


def analytic_bound_plus(phi0: float, nu: float) -> float:
    """Closed-form upper bound for the right moment of a monotone front."""
    if phi0 == 1.0:
        raise DomainError("bound has a pole at phi0 = 1")
    return -2.0 * np.log(abs((1.0 - phi0) / 2.0)) + 4.0 * nu / (3.0 * (1.0 - phi0) ** 2)


def analytic_bound_crossing(nu: float) -> tuple[float, float]:
    """Crossing (phi*, common value) of the two closed-form bounds.

    The minus bound decreases in phi0 and the plus bound increases, so the
    crossing over (-1, 1) is unique; located by bisection.
    """
    if not 0.0 <= nu <= 0.25:
        raise ConfigError("closed-form bounds hold for nu in [0, 1/4]")
    lo, hi = -1.0 + 1e-12, 1.0 - 1e-12

    def g(p: float) -> float:
        return analytic_bound_plus(p, nu) - analytic_bound_minus(p, nu)

    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    p = 0.5 * (lo + hi)
    return p, 0.5 * (analytic_bound_minus(p, nu) + analytic_bound_plus(p, nu))


def analytic_tau_bound(nu: float) -> float:
    """Upper bound for tau(phi'/2) on monotone fronts: half the crossing value."""
    _, value = analytic_bound_crossing(nu)
    return 0.5 * value


def find_tau_crossing(target: float, nu_lo: float, nu_hi: float,
                      profile_solver: Callable[[float], FrontProfile] | None = None,
                      nu_tol: float = 1e-4) -> float:
    """Bisection in nu of tau(phi'/2; nu) against the target level."""
    if profile_solver is None:
        profile_solver = solve_front

    def tau_at(nu: float) -> float:
        t, _ = tau(profile_solver(nu).potential())
        return t

    f_lo = tau_at(nu_lo) - target
    f_hi = tau_at(nu_hi) - target
    if f_lo == 0.0:
        return float(nu_lo)
    if f_hi == 0.0:
        return float(nu_hi)
    if f_lo * f_hi > 0.0:
        raise BracketError(f"tau - target has the same sign at both endpoints "
                           f"({f_lo:+.4e}, {f_hi:+.4e})")
    lo, hi = float(nu_lo), float(nu_hi)
    while hi - lo > nu_tol:
        mid = 0.5 * (lo + hi)
        if (tau_at(mid) - target) * f_lo > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bargmann_report(front: FrontProfile) -> BargmannReport:
    """All sharpness quantities of one front, each computed independently."""
    t, x_star = tau(front.potential())
    m, m_inf = monotonize(front.phi_sampled(), front.dphi)
    x0 = shock_offset(m, m_inf)
    # Quote the area identity in the same normalization as tau(phi'/2).
    dist = float(0.5 * l1_distance(m, m_inf, x0))
    return BargmannReport(nu=front.nu, tau=t, balance_point=x_star,
                          m_infinity=m_inf, shock_offset=x0,
                          l1_distance=dist, is_sharp=bool(t < 1.0))
