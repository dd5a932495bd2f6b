import numpy as np
import pytest

from frontlab import (FrontProfile, build_operator, count_negative_eigenvalues,
                      count_negative_roots, evans_curve, find_nu_critical,
                      shoot_evans)
from frontlab.errors import BracketError, ConfigError
from frontlab.evans import default_lambda_grid


def zero_potential_profile(L=40.0, n=201):
    """Test hook: a profile whose phi' vanishes identically."""
    x = np.linspace(-L, L, n)
    z = np.zeros_like(x)
    return FrontProfile(nu=0.0, grid=x, phi=z, dphi=z, ddphi=z,
                        half_length=L, residual=0.0, phase=float("nan"),
                        ode_tol=1e-10)


@pytest.mark.parametrize("lam", [-0.5, -0.1, -0.01])
def test_zero_potential_closed_form(lam):
    # constant-coefficient system: both shots ride frozen eigenvectors
    # (-1, k) and (1, k), so the determinant is exactly 2 k = 2 sqrt(-lam)
    d0 = shoot_evans(zero_potential_profile(), lam)
    assert abs(d0 - 2.0 * np.sqrt(-lam)) < 1e-9


def test_root_at_ground_state_nu0(fronts):
    fr = fronts(0.0)
    lam0 = -(3.0 - np.sqrt(5.0)) / 8.0  # closed-form ground energy of phi'/2
    scale = abs(shoot_evans(fr, -0.5))
    assert abs(shoot_evans(fr, lam0)) <= 1e-3 * scale


def test_single_sign_change_below_origin(fronts):
    fr = fronts(0.0)
    below = [shoot_evans(fr, lam) for lam in (-0.5, -0.3, -0.2)]
    assert all(v != 0.0 and np.sign(v) == np.sign(below[0]) for v in below)
    above = shoot_evans(fr, -0.05)
    assert np.sign(above) == -np.sign(below[0])


@pytest.mark.parametrize("nu", [0.0, 0.25])
def test_curve_roots_match_eigenvalues(fronts, nu):
    fr = fronts(nu)
    curve = evans_curve(fr)
    assert count_negative_roots(curve) == 1
    report = count_negative_eigenvalues(build_operator(fr.potential()))
    assert report.negative_count == 1
    assert abs(curve.negative_roots[0] - report.eigenvalues[0]) < 5e-3


def test_no_spurious_sign_changes_below_ground_state(fronts):
    fr = fronts(0.25)
    curve = evans_curve(fr)
    lam0 = curve.negative_roots[0]
    mask = curve.lambdas < lam0 - 0.01
    signs = np.sign(curve.deltas[mask])
    assert np.all(signs == signs[0])


def test_window_stability(fronts):
    # gap-lemma-backed: widening the shooting window changes nothing visible
    fr = fronts(0.25, half_length=70.0)
    for lam in (-0.5, -0.1, -0.01):
        a = shoot_evans(fr, lam, L=40.0)
        b = shoot_evans(fr, lam, L=60.0)
        assert abs(a - b) <= 1e-6 * abs(b)


def test_orientation_reproducible_across_grids():
    from frontlab import solve_front
    a = solve_front(0.25, grid_points=2001)
    b = solve_front(0.25, grid_points=4001)
    da = shoot_evans(a, 0.0)
    db = shoot_evans(b, 0.0)
    assert np.sign(da) == np.sign(db)
    assert abs(da - db) < 1e-6


def test_lambda_grid_shape():
    grid = default_lambda_grid(-2.0, 50)
    assert grid[0] == -2.0
    assert grid[-1] == 0.0
    assert np.all(np.diff(grid) > 0)
    with pytest.raises(ConfigError):
        default_lambda_grid(1.0)


def test_shoot_requires_window_inside_grid(fronts):
    fr = fronts(0.25)
    with pytest.raises(ConfigError):
        shoot_evans(fr, -0.1, L=100.0)
    with pytest.raises(ConfigError):
        shoot_evans(fr, 0.5)


def test_nu_critical_needs_bracket():
    with pytest.raises(BracketError):
        find_nu_critical(0.1, 0.2)


def test_nu_critical_tight_bracket():
    nu_c = find_nu_critical(4.09, 4.10, nu_tol=2e-3)
    assert 4.09 < nu_c < 4.10
