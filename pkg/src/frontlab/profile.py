"""Traveling-front profiles of the KdV-Burgers equation.

The stationary profile solves

    phi' + nu*phi'' = (phi^2 - 1)/2,    phi(-inf) = 1,  phi(+inf) = -1.

For nu > 0 the rest state +1 has a one-dimensional unstable manifold
(rate mu, the positive root of nu*mu^2 + mu - 1 = 0) while -1 attracts
every forward trajectory, so the connection is found by plain forward
shooting: start just off +1 along the unstable direction, integrate
until the trajectory settles into -1, then translate so the (last)
downward zero crossing sits at x = 0.  Profiles for nu < 0 come from
the exact symmetry (x, phi, nu) -> (-x, -phi, -nu).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import ConfigError, NoConnection, NonFiniteState
from .sampled import SampledFunction, trapezoid

_SEED_AMPLITUDE = 1e-8   # offset along the unstable eigenvector at the start
_BOUNDARY_TOL = 1e-6     # |phi(-L) - 1| + |phi(L) + 1| must stay below this


@dataclass(frozen=True)
class FrontProfile:
    """A sampled front: values and derivatives on a uniform grid over [-L, L].

    phase is the measured zero crossing of the stored samples; the solver
    normalizes it to x = 0, so it doubles as a self-check.
    """

    nu: float
    grid: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    ddphi: np.ndarray
    half_length: float
    residual: float
    phase: float
    ode_tol: float

    @property
    def spacing(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def phi_sampled(self) -> SampledFunction:
        return SampledFunction(self.grid, self.phi, 1.0, -1.0)

    def dphi_sampled(self) -> SampledFunction:
        return SampledFunction(self.grid, self.dphi, 0.0, 0.0)

    def potential(self) -> SampledFunction:
        """The Schrodinger potential phi'/2 attached to this front."""
        return SampledFunction(self.grid, 0.5 * self.dphi, 0.0, 0.0)

    def to_csv(self, path: str | Path) -> None:
        """Write x,phi,dphi,ddphi rows plus a JSON sidecar next to the CSV."""
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "phi", "dphi", "ddphi"])
            for row in zip(self.grid, self.phi, self.dphi, self.ddphi):
                w.writerow([repr(float(c)) for c in row])
        sidecar = {
            "nu": self.nu,
            "half_length": self.half_length,
            "residual": self.residual,
            "ode_tol": self.ode_tol,
        }
        path.with_suffix(".json").write_text(json.dumps(sidecar, sort_keys=True, indent=2) + "\n")


def unstable_rate(nu: float) -> float:
    """Positive root of nu*mu^2 + mu - 1 = 0 (decay rate at the state +1)."""
    if nu == 0.0:
        return 1.0
    return (-1.0 + np.sqrt(1.0 + 4.0 * nu)) / (2.0 * nu)


def default_half_length(nu: float) -> float:
    # The tail at -1 decays like exp(-x/(2 nu)) once nu > 1/4, so the
    # window has to grow linearly in nu to keep truncation below ~1e-8.
    return 40.0 * max(1.0, abs(nu))


def default_grid_points(half_length: float, target_h: float = 0.02) -> int:
    return int(round(2.0 * half_length / target_h)) + 1


def solve_front(nu: float,
                half_length: float | None = None,
                ode_tol: float = 1e-10,
                grid_points: int | None = None) -> FrontProfile:
    """Compute the front profile for any real nu by forward shooting.

    The returned profile is translated so that phi(0) = 0 (for oscillatory
    tails: the last downward zero crossing), spans [-half_length,
    +half_length] on a uniform grid, and stores phi' from the ODE state and
    phi'' from the right-hand side.
    """
    if half_length is None:
        half_length = default_half_length(nu)
    if grid_points is None:
        grid_points = default_grid_points(half_length)
    if half_length <= 0:
        raise ConfigError("half_length must be positive")
    if grid_points < 64:
        raise ConfigError("grid_points must be at least 64")
    if not ode_tol > 0:
        raise ConfigError("ode_tol must be positive")

    if nu < 0:
        return reflect_front(solve_front(-nu, half_length, ode_tol, grid_points))

    mu = unstable_rate(nu)
    delta = _SEED_AMPLITUDE
    L = float(half_length)
    # The descent happens ~log(4/delta)/mu past the start; leave room for the
    # right half-window plus a transition layer that widens with nu.
    x_max = np.log(4.0 / delta) / mu + L + 40.0 * max(1.0, np.sqrt(abs(nu)))

    if nu == 0.0:
        def rhs(x, y):
            return (0.5 * (y[0] * y[0] - 1.0),)
        y0 = (1.0 - delta,)
    else:
        def rhs(x, y):
            return (y[1], (0.5 * (y[0] * y[0] - 1.0) - y[1]) / nu)
        y0 = (1.0 - delta, -delta * mu)

    # Drive the integrator two decades below the contract tolerance: the
    # local-error control must leave room for global drift over ~100 units.
    tight = max(1e-2 * ode_tol, 1e-13)
    # The fast root at +1 scales like -1/nu, so explicit stepping becomes
    # stability-limited for small nu; switch to a stiff method there.
    method = "BDF" if 0.0 < nu < 5e-3 else "RK45"
    sol = solve_ivp(rhs, (0.0, x_max), y0, method=method,
                    rtol=tight, atol=tight, dense_output=True)
    if not sol.success:
        raise NonFiniteState(f"front integration failed: {sol.message}")
    if not np.all(np.isfinite(sol.y)):
        raise NonFiniteState("front integration produced non-finite state")

    # Locate the last downward zero crossing on a fine sweep of the dense
    # output, then polish it.  Crossings need |phi+1| >= 1, so "last" is
    # also the last crossing before the tail enters its final band.
    xs = np.linspace(0.0, x_max, max(20000, int(4 * x_max)))
    ph = sol.sol(xs)[0]
    sign = np.sign(ph)
    down = np.flatnonzero((sign[:-1] > 0) & (sign[1:] <= 0))
    if down.size == 0:
        raise NoConnection("trajectory never crossed zero; increase half_length or tighten ode_tol")
    i = down[-1]
    x_c = brentq(lambda x: sol.sol(x)[0], xs[i], xs[i + 1], xtol=1e-13, rtol=1e-15)
    if x_c + L > x_max:
        raise NoConnection("window extends past the integrated range; increase half_length")

    grid = np.linspace(-L, L, grid_points)
    shoot_x = grid + x_c
    phi = np.empty(grid_points)
    dphi = np.empty(grid_points)
    left = shoot_x < 0.0
    # Left of the start point the trajectory is the linearized unstable
    # manifold to O(delta^2) ~ 1e-16, so extend analytically.
    tail = delta * np.exp(mu * shoot_x[left])
    phi[left] = 1.0 - tail
    dphi[left] = -mu * tail
    y = sol.sol(shoot_x[~left])
    phi[~left] = y[0]
    if nu == 0.0:
        dphi[~left] = 0.5 * (y[0] * y[0] - 1.0)
        ddphi = phi * dphi
    else:
        dphi[~left] = y[1]
        ddphi = (0.5 * (phi * phi - 1.0) - dphi) / nu

    if not np.all(np.isfinite(phi)) or not np.all(np.isfinite(dphi)):
        raise NonFiniteState("resampled profile contains non-finite values")
    bc_err = abs(phi[0] - 1.0) + abs(phi[-1] + 1.0)
    if bc_err > _BOUNDARY_TOL:
        raise NoConnection(f"boundary mismatch {bc_err:.3e}; trajectory did not settle at -1 "
                           "within the window (increase half_length)")

    residual = float(np.max(np.abs(dphi + nu * ddphi - 0.5 * (phi * phi - 1.0))))
    phase = _measure_phase(grid, phi)
    return FrontProfile(nu=float(nu), grid=grid, phi=phi, dphi=dphi, ddphi=ddphi,
                        half_length=L, residual=residual, phase=phase, ode_tol=ode_tol)


def _measure_phase(grid: np.ndarray, phi: np.ndarray) -> float:
    """Interpolated abscissa of the last downward zero crossing of the samples."""
    sign = np.sign(phi)
    down = np.flatnonzero((sign[:-1] > 0) & (sign[1:] <= 0))
    if down.size == 0:
        return float("nan")
    i = down[-1]
    t = phi[i] / (phi[i] - phi[i + 1])
    return float(grid[i] + t * (grid[i + 1] - grid[i]))


def reflect_front(profile: FrontProfile) -> FrontProfile:
    """Profile for -nu via the exact symmetry (x, phi) -> (-x, -phi).

    An involution: reflecting twice restores the original samples bit for bit.
    """
    grid = profile.grid  # symmetric about 0, so -x re-maps onto the same grid
    phi = -profile.phi[::-1]
    dphi = profile.dphi[::-1]
    ddphi = -profile.ddphi[::-1]
    return FrontProfile(nu=-profile.nu, grid=grid, phi=phi, dphi=dphi, ddphi=ddphi,
                        half_length=profile.half_length, residual=profile.residual,
                        phase=_measure_phase(grid, phi), ode_tol=profile.ode_tol)


def front_residual(profile: FrontProfile) -> float:
    """Max profile-equation defect of the stored (phi, phi', phi'') samples."""
    if len(profile.grid) < 5:
        raise ConfigError("profile must have at least 5 grid points")
    defect = profile.dphi + profile.nu * profile.ddphi - 0.5 * (profile.phi ** 2 - 1.0)
    return float(np.max(np.abs(defect)))


def gradient_flux_integral(profile: FrontProfile) -> float:
    """Trapezoid of (phi')^2; equals 2/3 for every exact profile."""
    return trapezoid(profile.dphi ** 2, profile.spacing)
