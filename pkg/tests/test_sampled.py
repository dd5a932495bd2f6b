import numpy as np
import pytest

from frontlab import SampledFunction
from frontlab.errors import ConfigError
from frontlab.sampled import cumulative_trapezoid, trapezoid


def test_grid_must_be_uniform_and_increasing():
    with pytest.raises(ConfigError):
        SampledFunction(np.array([0.0, 1.0, 1.5]), np.zeros(3))
    with pytest.raises(ConfigError):
        SampledFunction(np.array([0.0, -1.0, -2.0]), np.zeros(3))
    with pytest.raises(ConfigError):
        SampledFunction(np.array([0.0, 1.0]), np.zeros(3))


def test_wide_linspace_grid_accepted():
    # abscissae rounding on wide domains must not trip the uniformity check
    g = np.linspace(-40960.0, 40960.0, 1024001)
    SampledFunction(g, np.zeros_like(g))


def test_check_tails():
    x = np.linspace(-10.0, 10.0, 201)
    f = SampledFunction(x, np.tanh(x), -1.0, 1.0)
    f.check_tails(1e-8)
    with pytest.raises(ConfigError):
        f.check_tails(1e-12)


def test_quadrature_helpers():
    x = np.linspace(0.0, 1.0, 1001)
    h = x[1] - x[0]
    assert abs(trapezoid(x**2, h) - 1.0 / 3.0) < 1e-6
    c = cumulative_trapezoid(np.ones_like(x), h)
    assert abs(c[-1] - 1.0) < 1e-12
    assert c[0] == 0.0


def test_shift_and_scale():
    x = np.linspace(-1.0, 1.0, 11)
    f = SampledFunction(x, x.copy(), -1.0, 1.0)
    g = f.shifted(2.0)
    assert g.grid[0] == 1.0 and np.array_equal(g.values, f.values)
    s = f.scaled(-2.0)
    assert s.left_limit == 2.0 and s.right_limit == -2.0
