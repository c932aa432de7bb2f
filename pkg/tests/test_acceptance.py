"""Acceptance suite: one test per criterion, each logging a PASS/FAIL summary line."""

import csv
import io
import json
import math
import time

import numpy as np
import pytest
from click.testing import CliRunner

from axialdirac.algebra import anticommutator, gamma, identity, metric, pauli
from axialdirac.cli import cli
from axialdirac.consistency import solve_consistency, uniqueness_scan
from axialdirac.fields import (TEST, Couplings, ode_residual, potential_integral_quadrature,
                               potential_integral_special)
from axialdirac.observables import normalization, tilde_closed_form, tilde_from_bilinears
from axialdirac.report import validate_report
from axialdirac.residual import (GridSpec, free_dirac_residual, interacting_dirac_residual,
                                 potential_scale)
from axialdirac.state import make_state, self_consistent_state

from .conftest import random_params

pytestmark = pytest.mark.acceptance

QPERP_TOL = 1e-9
QPERP_TOL_NEAR_THRESHOLD = 1e-8
CLOSED_FORM_TOL = 1e-9
BILINEAR_TOL = 1e-12
RADIAL_FLUX_TOL = 1e-13
BILINEAR_DRAWS = 1000
FREE_RESIDUAL_TOL = 1e-12
FREE_DRAWS = 100
ORDER_RANGE = (3.5, 4.5)
INTERACTING_TOL = 1e-12
WRONG_BRANCH_FACTOR = 1e-4
LINEARITY_TOL = 0.02
POTENTIAL_PATH_TOL = 1e-10
I_REF = 1.3192634
I_REF_TOL = 1e-7
NORMALIZATION_TOL = 1e-8
ELL_Z_TOL = 1e-12
ALGEBRA_TOL = 1e-15


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_1_width_claim(acceptance_log):
    errors = {}
    with Timer() as t:
        for eps in (1.1, 1.5, 2.0, 5.0, 10.0, 100.0, 1.0001):
            errors[eps] = abs(solve_consistency(eps).q_perp_star - 1.0)
    ok = (all(errors[e] <= QPERP_TOL for e in errors if e != 1.0001)
          and errors[1.0001] <= QPERP_TOL_NEAR_THRESHOLD and t.elapsed < 1.0)
    acceptance_log("1 q_perp = 1", ok,
                   f"max |q_perp-1| = {max(errors.values()):.2e}, {t.elapsed:.2f}s")
    assert ok, errors


def test_criterion_2_closed_form_and_uniqueness(acceptance_log):
    worst = 0.0
    with Timer() as t:
        for eps in (1.1, 1.5, 2.0, 5.0, 10.0):
            rep = solve_consistency(eps)
            dphi = abs(rep.phi_star - 1.5 * math.pi) % (2 * math.pi)
            worst = max(worst, abs(rep.theta_star - math.pi / 2),
                        min(dphi, 2 * math.pi - dphi),
                        abs(math.tanh(rep.beta_star / 2) - 1 / eps))
        basins = uniqueness_scan(2.0, n_phi=128, n_beta=128, beta_max=5.0)
    ok = worst <= CLOSED_FORM_TOL and len(basins) == 1 and t.elapsed < 10.0
    acceptance_log("2 closed-form recovery", ok,
                   f"max parameter error {worst:.2e}, {len(basins)} basin(s), {t.elapsed:.2f}s")
    assert ok


def test_criterion_3_bilinear_equivalence(acceptance_log, rng):
    worst, radial = 0.0, 0.0
    with Timer() as t:
        for p in random_params(rng, BILINEAR_DRAWS, ell_z=1.0):
            alpha = rng.uniform(0, 2 * math.pi)
            rho = rng.uniform(0.05, 5.0)
            bil = tilde_from_bilinears(p, rho=rho, alpha=alpha)
            worst = max(worst, float(np.max(np.abs(bil.as_array() - tilde_closed_form(p).as_array()))))
            radial = max(radial, abs(bil.nu_r))
    ok = worst <= BILINEAR_TOL and radial <= RADIAL_FLUX_TOL and t.elapsed < 5.0
    acceptance_log("3 bilinear equivalence", ok,
                   f"{BILINEAR_DRAWS} draws, max diff {worst:.2e}, max |nu_r| {radial:.2e}, "
                   f"{t.elapsed:.2f}s")
    assert ok


def test_criterion_4_free_residual(acceptance_log, rng):
    with Timer() as t:
        worst = max(free_dirac_residual(p)[0] for p in random_params(rng, FREE_DRAWS))
        p = make_state(2.0, 1.0, 1.0, 1.0)
        coarse = GridSpec(0.5, 10.0, 201, "central_fd")
        ratio = free_dirac_residual(p, coarse)[0] / free_dirac_residual(p, coarse.refined())[0]
    ok = worst <= FREE_RESIDUAL_TOL and ORDER_RANGE[0] <= ratio <= ORDER_RANGE[1] and t.elapsed < 30.0
    acceptance_log("4 free Dirac residual", ok,
                   f"max rel {worst:.2e} over {FREE_DRAWS} draws, fd ratio {ratio:.3f}, {t.elapsed:.2f}s")
    assert ok


def test_criterion_5_interacting_residual(acceptance_log):
    with Timer() as t:
        at_point = max(interacting_dirac_residual(self_consistent_state(eps), TEST)[0]
                       for eps in (1.1, 2.0, 5.0, 10.0))
        wrong = self_consistent_state(2.0).replace(phi=math.pi / 2)
        full = interacting_dirac_residual(wrong, TEST)[0]
        scale = potential_scale(wrong, TEST)
        half = interacting_dirac_residual(wrong, Couplings(0.5, 1.0))[0]
        linearity = abs(half / full - 0.5) / 0.5
    ok = (at_point <= INTERACTING_TOL and full >= WRONG_BRANCH_FACTOR * scale
          and linearity <= LINEARITY_TOL and t.elapsed < 30.0)
    acceptance_log("5 interacting Dirac residual", ok,
                   f"self-consistent {at_point:.2e}, wrong branch {full:.3f} "
                   f"(scale {scale:.3f}), linearity dev {linearity:.2e}, {t.elapsed:.2f}s")
    assert ok


def test_criterion_6_potentials(acceptance_log):
    with Timer() as t:
        rho = np.logspace(-3, math.log10(50.0), 40)
        worst = 0.0
        for q in (0.5, 1.0, 2.0):
            special = potential_integral_special(q, rho)
            quad = np.array([potential_integral_quadrature(q, r) for r in rho])
            worst = max(worst, float(np.max(np.abs(special - quad))))
        ref_quad = potential_integral_quadrature(1.0, 1.0)
        ref_special = potential_integral_special(1.0, 1.0)
        p = make_state(2.0, 1.0, 1.0, 1.0)
        tilde = tilde_closed_form(p)
        errs = []
        for n in (401, 801):
            r_phi, r_az = ode_residual(p, TEST, tilde, np.linspace(0.5, 5.0, n))
            errs.append(max(r_phi.max_abs(), r_az.max_abs()))
        ratio = errs[0] / errs[1]
    ok = (worst <= POTENTIAL_PATH_TOL
          and abs(ref_quad - I_REF) <= I_REF_TOL and abs(ref_special - I_REF) <= I_REF_TOL
          and ORDER_RANGE[0] <= ratio <= ORDER_RANGE[1] and t.elapsed < 5.0)
    acceptance_log("6 potentials", ok,
                   f"path diff {worst:.2e}, I(1) = {ref_special:.10f}/{ref_quad:.10f}, "
                   f"ODE ratio {ratio:.3f}, {t.elapsed:.2f}s")
    assert ok


def test_criterion_7_normalization(acceptance_log):
    with Timer() as t:
        states = [self_consistent_state(eps) for eps in (1.1, 2.0, 5.0, 10.0)]
        states += [make_state(2.0, 1.0, math.pi / 2, 0.0), make_state(5.0, 2.5, 0.3, 4.0)]
        worst = max(abs(normalization(p) - 1.0) for p in states)
        ell_spread = 0.0
        for p in states[:2] + states[-2:]:
            ref = normalization(p)
            for ell in (0.01, 3.0, 1e4):
                ell_spread = max(ell_spread, abs(normalization(p.replace(ell_z=ell)) - ref))
    ok = worst <= NORMALIZATION_TOL and ell_spread <= ELL_Z_TOL and t.elapsed < 2.0
    acceptance_log("7 normalization", ok,
                   f"max |N-1| {worst:.2e}, ell_z spread {ell_spread:.2e}, {t.elapsed:.2f}s")
    assert ok


def test_criterion_8_algebra(acceptance_log):
    worst = 0.0
    with Timer() as t:
        s = [pauli(a) for a in "xyz"]
        levi = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}
        for a in range(3):
            for b in range(3):
                expected = identity(2) * (a == b)
                for c in range(3):
                    expected = expected + 1j * levi.get((a, b, c), 0) * s[c]
                worst = max(worst, float(np.max(np.abs(s[a] @ s[b] - expected))))
        g = [gamma(0), gamma("x"), gamma("y"), gamma("z")]
        eta = metric()
        for mu in range(4):
            for nu in range(4):
                diff = anticommutator(g[mu], g[nu]) - 2 * eta[mu, nu] * identity(4)
                worst = max(worst, float(np.max(np.abs(diff))))
    ok = worst <= ALGEBRA_TOL and t.elapsed < 1.0
    acceptance_log("8 algebra identities", ok, f"max entry error {worst:.1e}, {t.elapsed:.3f}s")
    assert ok


def test_criterion_9_end_to_end(acceptance_log):
    runner = CliRunner()
    with Timer() as t:
        verify = runner.invoke(cli, ["verify"])
        report = json.loads(verify.stdout)
        validate_report(report)
        scan = runner.invoke(cli, ["scan", "--epsilon-min", "1.1", "--epsilon-max", "10",
                                   "--steps", "10"])
        q_perp = [float(r["q_perp"]) for r in csv.DictReader(io.StringIO(scan.stdout))]
    q_err = max(abs(q - 1.0) for q in q_perp)
    ok = (verify.exit_code == 0 and scan.exit_code == 0 and len(q_perp) == 10
          and q_err <= QPERP_TOL and t.elapsed < 60.0)
    acceptance_log("9 end-to-end CLI", ok,
                   f"verify exit {verify.exit_code} ({len(report['checks'])} checks, schema-valid), "
                   f"scan max |q_perp-1| {q_err:.2e}, {t.elapsed:.2f}s")
    assert ok
