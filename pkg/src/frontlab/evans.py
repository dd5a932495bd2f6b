"""Rescaled Evans function for the front's Schrodinger operator.

The eigenvalue problem -v'' + (phi'/2) v = lambda v in first-order form
has limiting decay rates +/- sqrt(-lambda) for lambda < 0.  Two solutions
are shot toward x = 0: one from +L seeded on the decaying direction
(-1, sqrt(-lambda)), one from -L seeded on (1, sqrt(-lambda)), each with
its exponential rate scaled out so the integrands stay O(1).  Their
determinant at the matching point is the rescaled Evans function; its
negative roots are exactly the eigenvalues, and its value at the origin
(run with sqrt(-lambda) = 0) detects the zero-energy resonance whose
sign change locates the critical dispersion.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from .errors import BracketError, ConfigError, NonFiniteState
from .profile import FrontProfile, solve_front

_SHOOT_RTOL = 1e-10
_SHOOT_ATOL = 1e-12


@dataclass(frozen=True)
class EvansCurve:
    """Sampled rescaled Evans function on a lambda < 0 grid plus the origin."""

    nu: float
    lambdas: np.ndarray
    deltas: np.ndarray
    half_length: float
    negative_roots: list[float]
    delta_at_zero: float

    def to_csv(self, path: str | Path) -> None:
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["lambda", "delta"])
            for lam, d in zip(self.lambdas, self.deltas):
                w.writerow([repr(float(lam)), repr(float(d))])
        meta = {
            "nu": self.nu,
            "negative_roots": self.negative_roots,
            "delta_at_zero": self.delta_at_zero,
        }
        path.with_suffix(".json").write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")


def _make_shooter(front: FrontProfile, L: float) -> Callable[[float], float]:
    """Evaluator of the rescaled determinant at a single lambda <= 0."""
    if L <= 0:
        raise ConfigError("shooting half-length must be positive")
    if L > front.half_length + 1e-9:
        raise ConfigError(f"front grid spans [-{front.half_length}, {front.half_length}], "
                          f"cannot shoot from +/-{L}")
    spline = CubicSpline(front.grid, 0.5 * front.dphi)
    lo, hi = front.grid[0], front.grid[-1]

    def q_at(x: float) -> float:
        if x < lo or x > hi:
            return 0.0
        return float(spline(x))

    def delta0(lam: float) -> float:
        if lam > 0.0:
            raise ConfigError("the rescaled determinant is defined for lambda <= 0")
        kap = float(np.sqrt(-lam))

        def rhs_from_right(x, w):
            # w1' = (A + kap I) w1 with A = [[0, 1], [q - lam, 0]]
            return (kap * w[0] + w[1], (q_at(x) - lam) * w[0] + kap * w[1])

        def rhs_from_left(x, w):
            return (-kap * w[0] + w[1], (q_at(x) - lam) * w[0] - kap * w[1])

        s1 = solve_ivp(rhs_from_right, (L, 0.0), (-1.0, kap), method="RK45",
                       rtol=_SHOOT_RTOL, atol=_SHOOT_ATOL)
        s2 = solve_ivp(rhs_from_left, (-L, 0.0), (1.0, kap), method="RK45",
                       rtol=_SHOOT_RTOL, atol=_SHOOT_ATOL)
        if not (s1.success and s2.success):
            raise NonFiniteState("Evans shooting failed to reach the matching point")
        w1 = s1.y[:, -1]
        w2 = s2.y[:, -1]
        if not np.all(np.isfinite(w1)) or not np.all(np.isfinite(w2)):
            raise NonFiniteState("Evans shooting produced non-finite state")
        # Orientation det[w2 w1]: the zero potential then gives +2 sqrt(-lambda).
        return float(w2[0] * w1[1] - w2[1] * w1[0])

    return delta0


def shoot_evans(front: FrontProfile, lam: float, L: float | None = None) -> float:
    """Rescaled Evans determinant at one lambda <= 0 (lambda = 0 included)."""
    if L is None:
        L = front.half_length
    return _make_shooter(front, L)(lam)


def _refine_root(f: Callable[[float], float], lo: float, hi: float,
                 f_lo: float, tol: float = 1e-8) -> float:
    # cells live in [lambda_min, 0], so midpoints stay strictly negative
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (f_lo < 0.0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def default_lambda_grid(lambda_min: float = -2.0, n_points: int = 200) -> np.ndarray:
    """Log-spaced lambda < 0 samples plus the origin (roots pile up near 0)."""
    if lambda_min >= 0:
        raise ConfigError("lambda_min must be negative")
    lams = -np.logspace(np.log10(-lambda_min), np.log10(1e-4), n_points)
    return np.append(lams, 0.0)


def evans_curve(front: FrontProfile,
                lambdas: np.ndarray | None = None,
                L: float | None = None,
                root_tol: float = 1e-8) -> EvansCurve:
    """Sample the rescaled Evans function and bisect every bracketed root."""
    if L is None:
        L = front.half_length
    if lambdas is None:
        lambdas = default_lambda_grid()
    lambdas = np.asarray(lambdas, dtype=float)
    delta0 = _make_shooter(front, L)
    deltas = np.array([delta0(lam) for lam in lambdas])

    roots: list[float] = []
    for i in range(len(lambdas) - 1):
        a, b = deltas[i], deltas[i + 1]
        if a == 0.0:
            roots.append(float(lambdas[i]))
        elif a * b < 0.0:
            roots.append(_refine_root(delta0, float(lambdas[i]), float(lambdas[i + 1]),
                                      a, root_tol))
    d_zero = float(deltas[-1]) if lambdas[-1] == 0.0 else delta0(0.0)
    return EvansCurve(nu=front.nu, lambdas=lambdas, deltas=deltas,
                      half_length=float(L), negative_roots=roots,
                      delta_at_zero=d_zero)


def count_negative_roots(curve: EvansCurve) -> int:
    """Number of bisection-refined sign changes of the curve on lambda < 0."""
    return len(curve.negative_roots)


def find_nu_critical(nu_lo: float, nu_hi: float,
                     profile_solver: Callable[[float], FrontProfile] | None = None,
                     nu_tol: float = 1e-3) -> float:
    """Dispersion value where the determinant at the origin changes sign.

    Recomputes the front at every bisection iterate; raises BracketError when
    the endpoint signs agree (no resonance inside the bracket).
    """
    if profile_solver is None:
        profile_solver = solve_front

    def d0(nu: float) -> float:
        front = profile_solver(nu)
        return shoot_evans(front, 0.0)

    f_lo = d0(nu_lo)
    f_hi = d0(nu_hi)
    if f_lo == 0.0:
        return float(nu_lo)
    if f_hi == 0.0:
        return float(nu_hi)
    if (f_lo < 0.0) == (f_hi < 0.0):
        raise BracketError(f"determinant at the origin has the same sign at both "
                           f"endpoints ({f_lo:+.4e}, {f_hi:+.4e})")
    lo, hi = float(nu_lo), float(nu_hi)
    while hi - lo > nu_tol:
        mid = 0.5 * (lo + hi)
        if (d0(mid) < 0.0) == (f_lo < 0.0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
