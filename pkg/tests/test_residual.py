import math

import numpy as np
import pytest

from axialdirac.algebra import gamma
from axialdirac.errors import GridError
from axialdirac.fields import TEST, Couplings
from axialdirac.residual import (GridSpec, default_grid, free_dirac_residual,
                                 interacting_dirac_residual, potential_scale)
from axialdirac.state import (CylPoint, eval_bispinor, make_state, self_consistent_state,
                              spinor_v, spinor_w)

from .conftest import random_params


def test_free_residual_random_draws(rng):
    for p in random_params(rng, 30):
        assert free_dirac_residual(p)[0] <= 1e-12


def test_free_residual_order_two_in_fd_mode():
    p = make_state(2.0, 1.0, 1.0, 1.0)
    coarse = GridSpec(0.5, 10.0, 201, "central_fd")
    r1 = free_dirac_residual(p, coarse)[0]
    r2 = free_dirac_residual(p, coarse.refined())[0]
    assert 3.5 <= r1 / r2 <= 4.5


def test_free_residual_detects_perturbed_spinor():
    p = make_state(2.0, 1.0, 1.0, 1.0)
    w = spinor_w(p)
    v = spinor_v(p, w).scaled(1.01)
    assert free_dirac_residual(p, spinors=(w, v))[0] >= 1e-3


def test_cartesian_cross_check():
    """The cylindrical operator agrees with Cartesian finite differences of the full field."""
    p = make_state(2.5, 0.9, 1.1, 2.3)
    g = [gamma(0), gamma("x"), gamma("y"), gamma("z")]

    def field(x, y, z):
        return eval_bispinor(p, CylPoint(math.hypot(x, y), math.atan2(y, x), z))

    h = 1e-3
    for x, y in [(0.8, 0.3), (0.2, 1.1), (1.5, -0.7)]:
        psi = field(x, y, 0.0)
        grads = []
        for d in np.eye(3):
            f = [field(x + k * h * d[0], y + k * h * d[1], k * h * d[2]) for k in (-2, -1, 1, 2)]
            grads.append((f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h))
        pgamma = sum(g[k + 1] @ (-1j * grads[k]) for k in range(3))
        res = p.epsilon * g[0] @ psi - pgamma - psi
        assert np.linalg.norm(res) <= 1e-8 * np.linalg.norm(psi)


@pytest.mark.parametrize("eps", [1.0001, 1.1, 2.0, 10.0])
def test_interacting_residual_self_consistent(eps):
    assert interacting_dirac_residual(self_consistent_state(eps), TEST)[0] <= 1e-12


def test_interacting_residual_wrong_branch():
    p = self_consistent_state(2.0).replace(phi=math.pi / 2)
    rel = interacting_dirac_residual(p, TEST)[0]
    assert rel > 0.01
    assert rel >= 1e-4 * potential_scale(p, TEST)


def test_interacting_residual_linear_in_coupling():
    p = self_consistent_state(2.0).replace(phi=math.pi / 2)
    full = interacting_dirac_residual(p, Couplings(1.0))[0]
    half = interacting_dirac_residual(p, Couplings(0.5))[0]
    assert half == pytest.approx(full / 2, rel=0.02)


def test_interacting_residual_azimuth_independent():
    p = self_consistent_state(3.0).replace(phi=1.0)
    ref = interacting_dirac_residual(p, TEST, alpha=0.0)[1].values
    for alpha in (0.7, 2.0, 5.5):
        np.testing.assert_allclose(interacting_dirac_residual(p, TEST, alpha=alpha)[1].values,
                                   ref, rtol=1e-10, atol=1e-13)


def test_zero_coupling_reduces_to_free():
    p = make_state(2.0, 0.7, 0.4, 3.0)
    assert interacting_dirac_residual(p, Couplings(0.0))[0] == free_dirac_residual(p)[0]


def test_default_grid():
    g = default_grid(make_state(2.0, 1.0, 1.0, 1.0))
    assert g.points == 2048 and g.rho_min == 1e-3


def test_grid_refined_halves_step():
    g = GridSpec(0.1, 2.1, 21)
    assert g.refined().h == pytest.approx(g.h / 2)


@pytest.mark.parametrize("kwargs", [
    dict(rho_min=0.0, rho_max=1.0, points=32),
    dict(rho_min=1.0, rho_max=0.5, points=32),
    dict(rho_min=0.1, rho_max=1.0, points=8),
    dict(rho_min=0.1, rho_max=1.0, points=32, derivative_mode="spectral"),
])
def test_grid_validation(kwargs):
    with pytest.raises(GridError):
        GridSpec(**kwargs)
