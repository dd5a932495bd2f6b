"""Uniform-grid sampled functions.

SampledFunction is the common currency between the modules: front
derivatives, Schrodinger potentials, monotonizations and PDE
perturbations all travel as (grid, values) pairs with asserted limits
at the two ends of the (truncated) line.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class SampledFunction:
    """Real-valued function sampled on a uniform, strictly increasing grid.

    left_limit / right_limit are the asserted limits as x -> -/+ infinity;
    they are metadata, not enforced pointwise (use check_tails for that).
    """

    grid: np.ndarray
    values: np.ndarray
    left_limit: float = 0.0
    right_limit: float = 0.0

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.size < 2:
            raise ConfigError("grid must be 1-D with at least 2 points")
        if values.shape != grid.shape:
            raise ConfigError("values and grid must have the same shape")
        d = np.diff(grid)
        if np.any(d <= 0):
            raise ConfigError("grid must be strictly increasing")
        # Uniformity to 1e-12 relative to the coordinate magnitude: abscissae
        # produced by linspace on wide domains carry ~eps*|x| rounding, so
        # measuring against the spacing itself would reject valid grids.
        scale = max(1.0, float(np.abs(grid[[0, -1]]).max()))
        if np.max(np.abs(d - d.mean())) > 1e-12 * scale:
            raise ConfigError("grid spacing is not uniform")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def spacing(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def __len__(self) -> int:
        return self.grid.size

    def check_tails(self, tol: float) -> None:
        """Raise unless the end samples sit within tol of the asserted limits."""
        err = abs(self.values[0] - self.left_limit) + abs(self.values[-1] - self.right_limit)
        if not err <= tol:
            raise ConfigError(f"end samples deviate from declared limits by {err:.3e} > {tol:.3e}")

    def shifted(self, a: float) -> "SampledFunction":
        return SampledFunction(self.grid + a, self.values, self.left_limit, self.right_limit)

    def scaled(self, c: float) -> "SampledFunction":
        return SampledFunction(self.grid, c * self.values,
                               c * self.left_limit, c * self.right_limit)


def trapezoid(f: np.ndarray, h: float) -> float:
    """Composite trapezoid of samples f with uniform spacing h."""
    return float(h * (np.sum(f) - 0.5 * (f[0] + f[-1])))


def cumulative_trapezoid(f: np.ndarray, h: float) -> np.ndarray:
    """Running trapezoid integral anchored at the first grid point."""
    out = np.empty_like(f)
    out[0] = 0.0
    np.cumsum(0.5 * h * (f[1:] + f[:-1]), out=out[1:])
    return out
