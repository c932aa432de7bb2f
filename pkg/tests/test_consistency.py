import math

import numpy as np
import pytest

from axialdirac import consistency
from axialdirac.algebra import nullspace_test
from axialdirac.consistency import (closed_form_solution, condition_residuals, eq11_matrices,
                                    potential_condition_residuals, solve_consistency,
                                    uniqueness_scan)
from axialdirac.errors import ConvergenceError, DomainError
from axialdirac.fields import Couplings, make_potentials
from axialdirac.observables import tilde_closed_form
from axialdirac.state import make_state, self_consistent_state, spinor_w

LN3 = math.log(3.0)


def test_matrices_vanish_without_fields():
    m1, m2 = eq11_matrices(make_state(2.0, 1.0, 1.0, 1.0), 0.0, 0.0)
    assert not m1.any() and not m2.any()


def test_matrices_example():
    p = make_state(2.0, LN3, math.pi / 2, 1.5 * math.pi)
    m1, m2 = eq11_matrices(p, -1.0, -1.0)
    np.testing.assert_allclose(m1, [[-1, 1j], [-1j, -1]], atol=1e-14)
    np.testing.assert_allclose(m2, [[1, -1j], [1j, 1]], atol=1e-14)


def test_conditions_at_self_consistent_point():
    res = condition_residuals(make_state(2.0, LN3, math.pi / 2, 1.5 * math.pi))
    assert set(res) == {"r9", "r13a", "r13b", "r14a", "r14b"}
    assert max(abs(v) for v in res.values()) <= 1e-13


def test_conditions_on_wrong_branch():
    # sin(theta) sin(phi) = +1: n = 1 + (1/3)(5/3 - 4/3) = 10/9, nu_z = (2/sqrt3)(1/sqrt3) = 2/3
    res = condition_residuals(make_state(2.0, LN3, math.pi / 2, math.pi / 2))
    assert res["r13a"] == pytest.approx(2 * 10 / 9 - 2 * 2 / 3, abs=1e-14)
    assert res["r13a"] == pytest.approx(8 / 9, abs=1e-14)


def test_r9_at_pole():
    assert condition_residuals(make_state(2.0, 1.0, 0.0, 1.0))["r9"] == 1.0


def test_homogeneity_in_couplings():
    p = make_state(3.0, 0.8, 1.2, 4.0)
    tilde = tilde_closed_form(p)
    ref = condition_residuals(p)
    for cpl in (Couplings(1.0, 1.0), Couplings(7.3e-3, 1.0), Couplings(0.5, 20.0)):
        pot = make_potentials(p, cpl, tilde)
        rho = 0.9
        scale = -cpl.strength * (pot.phi(rho) / (-cpl.strength * tilde.n_t))
        got = potential_condition_residuals(p, pot.phi(rho) / scale, pot.a_z(rho) / scale)
        for key in ref:
            assert got[key] == pytest.approx(ref[key], abs=1e-13)
    assert condition_residuals(p.replace(ell_z=50.0)) == ref


def test_nullspace_with_actual_potentials():
    for eps in (1.1, 2.0, 10.0):
        p = self_consistent_state(eps)
        pot = make_potentials(p, Couplings(1.0), tilde_closed_form(p))
        w = spinor_w(p)
        for rho in (0.01, 0.3, 1.0, 4.0, 20.0):
            phi_val, az_val = pot.phi(rho), pot.a_z(rho)
            for m in eq11_matrices(p, phi_val, az_val):
                assert nullspace_test(m, w, 1e-12)
            assert np.max(np.abs(eq11_matrices(p, phi_val, az_val)[0] @ w.as_array())) <= \
                1e-12 * max(1.0, abs(phi_val))


def test_closed_form_solution():
    theta, phi, beta = closed_form_solution(2.0)
    assert (theta, phi) == (math.pi / 2, 1.5 * math.pi)
    assert beta == pytest.approx(LN3, abs=1e-15)
    with pytest.raises(DomainError):
        closed_form_solution(1.0)


@pytest.mark.parametrize("eps", [1.1, 1.5, 2.0, 5.0, 10.0, 100.0])
def test_solver_recovers_closed_form(eps):
    rep = solve_consistency(eps)
    assert rep.matched_closed_form
    assert abs(rep.theta_star - math.pi / 2) <= 1e-9
    assert abs(rep.phi_star - 1.5 * math.pi) <= 1e-9
    assert abs(math.tanh(rep.beta_star / 2) - 1 / eps) <= 1e-9
    assert abs(rep.q_perp_star - 1.0) <= 1e-10
    assert abs(rep.q_z_star - eps) <= 1e-10 * max(1.0, eps)


def test_solver_near_threshold():
    rep = solve_consistency(1.0001)
    assert abs(rep.q_perp_star - 1.0) <= 1e-8


def test_solver_beta_at_large_energy():
    rep = solve_consistency(100.0)
    assert rep.beta_star == pytest.approx(2 * math.atanh(0.01), abs=1e-12)


def test_solver_rejects_bad_energy():
    with pytest.raises(DomainError):
        solve_consistency(1.0)


def test_convergence_error_carries_diagnostics(monkeypatch):
    monkeypatch.setattr(consistency, "_refine", lambda eps, phi0, beta0: None)
    with pytest.raises(ConvergenceError) as info:
        solve_consistency(2.0)
    assert info.value.best_residual == math.inf


def test_report_dict():
    d = solve_consistency(2.0).as_dict()
    assert set(d) == {"epsilon", "theta", "phi", "beta", "q_perp", "residual_norm",
                      "matched_closed_form"}


def test_single_basin_at_two():
    basins = uniqueness_scan(2.0, 128, 128, 5.0)
    assert len(basins) == 1
    assert basins[0].phi == pytest.approx(1.5 * math.pi, abs=1e-9)
    assert basins[0].beta == pytest.approx(LN3, abs=1e-9)


@pytest.mark.parametrize("eps", [1.1, 10.0])
def test_single_basin_other_energies(eps):
    assert len(uniqueness_scan(eps)) == 1


def test_zero_threshold_gives_no_basins():
    assert uniqueness_scan(2.0, 64, 64, threshold=0.0) == []


def test_scan_rejects_coarse_grid():
    with pytest.raises(DomainError):
        uniqueness_scan(2.0, 32, 128)
