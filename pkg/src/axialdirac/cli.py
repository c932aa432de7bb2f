"""Command-line interface.

Usage:
    axialdirac verify                          # full check suite, JSON report
    axialdirac solve --epsilon 2               # self-consistent (theta, phi, beta, q_perp)
    axialdirac profile --epsilon 2 --rho-max 10 --points 11 --columns I
    axialdirac scan --epsilon-min 1.1 --epsilon-max 10 --steps 10
    axialdirac residual --epsilon 2 --mode interacting --deriv analytic

Exit codes: 0 success, 1 check or convergence failure, 2 usage/configuration error.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys

import click
import numpy as np

from .consistency import solve_consistency
from .errors import ConfigurationError, ConvergenceError, DomainError, GridError
from .fields import couplings_profile, make_potentials, potential_integral_special
from .observables import tilde_closed_form
from .report import run_suite
from .residual import GridSpec, default_grid, free_dirac_residual, interacting_dirac_residual
from .state import StateParams, radial_psi_sq, self_consistent_state

__all__ = ["cli", "main"]

PROFILE_COLUMNS = ("psi2", "n", "phi", "az", "I")


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        click.echo(text, nl=not text.endswith("\n"))
    else:
        with open(out, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)


def _require_epsilon(value: float, hint: str = "--epsilon") -> float:
    if not (math.isfinite(value) and value > 1.0):
        raise click.BadParameter(f"must be > 1, got {value}", param_hint=hint)
    return value


def _build_state(epsilon, beta, theta, phi, ell_z) -> StateParams:
    """State from flags; omitted beta/theta/phi take their self-consistent values."""
    _require_epsilon(epsilon)
    if not (math.isfinite(ell_z) and ell_z > 0.0):
        raise click.BadParameter(f"must be > 0, got {ell_z}", param_hint="--ell-z")
    ref = self_consistent_state(epsilon, ell_z)
    values = {"beta": ref.beta if beta is None else beta,
              "theta": ref.theta if theta is None else theta,
              "phi": ref.phi if phi is None else phi}
    try:
        return StateParams(epsilon, values["beta"], values["theta"], values["phi"], ell_z)
    except DomainError as exc:
        hint = next((f"--{k}" for k in values if str(exc).startswith(k)), None)
        raise click.BadParameter(str(exc), param_hint=hint) from exc


def _couplings(name: str, ell_z: float):
    try:
        return couplings_profile(name, ell_z)
    except DomainError as exc:
        raise click.BadParameter(str(exc), param_hint="--ell-z") from exc


_couplings_option = click.option("--couplings", "couplings_name", type=click.Choice(["physics", "test"]),
                                 default="test", show_default=True,
                                 help="physics: CODATA alpha_f; test: alpha_f = 1.")
_ell_z_option = click.option("--ell-z", type=float, default=1.0, show_default=True,
                             help="Quantization length along z in Compton wavelengths.")
_out_option = click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
                           help="Output file (default: standard output).")


def _state_options(f):
    f = click.option("--phi", type=float, default=None, help="Spin azimuth in [0, 2pi).")(f)
    f = click.option("--theta", type=float, default=None, help="Spin polar angle in [0, pi].")(f)
    f = click.option("--beta", type=float, default=None, help="Localization rapidity > 0.")(f)
    return f


@click.group()
@click.version_option(package_name="artifact")
def cli():
    """Semi-localized axial Dirac state: verification, solving and profiles."""


@cli.command()
@click.option("--epsilon", "epsilon_list", default="1.1,2,5,10", show_default=True,
              help="Comma-separated rescaled energies, each > 1.")
@_couplings_option
@_ell_z_option
@click.option("--tol", type=float, default=None,
              help="Override the tolerance of every upper-bound check.")
@_out_option
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json", show_default=True)
def verify(epsilon_list, couplings_name, ell_z, tol, out, fmt):
    """Run the verification suite and write a JSON report."""
    try:
        epsilons = [float(tok) for tok in epsilon_list.split(",") if tok.strip()]
    except ValueError as exc:
        raise click.BadParameter(f"not a list of numbers: {epsilon_list!r}",
                                 param_hint="--epsilon") from exc
    couplings = _couplings(couplings_name, ell_z)
    try:
        report = run_suite(epsilons, couplings, tol=tol)
    except ConfigurationError as exc:
        hint = "--tol" if str(exc).startswith("tol") else "--epsilon"
        raise click.BadParameter(str(exc), param_hint=hint) from exc
    _emit(report.to_json() + "\n", out)
    for check in report.failures():
        click.echo(f"FAIL {check.id}: value={check.value} tolerance={check.tolerance}", err=True)
    sys.exit(0 if report.passed else 1)


@cli.command()
@click.option("--epsilon", type=float, required=True, help="Rescaled energy > 1.")
@click.option("--solver-tol", type=float, default=1e-12, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@_out_option
def solve(epsilon, solver_tol, fmt, out):
    """Solve the self-consistency conditions at one energy."""
    _require_epsilon(epsilon)
    if not solver_tol > 0.0:
        raise click.BadParameter("must be > 0", param_hint="--solver-tol")
    try:
        rep = solve_consistency(epsilon, solver_tol=solver_tol)
    except ConvergenceError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    row = {"epsilon": epsilon, "theta": rep.theta_star, "phi": rep.phi_star, "beta": rep.beta_star,
           "q_perp": rep.q_perp_star, "residual_norm": rep.residual_norm,
           "matched_closed_form": rep.matched_closed_form}
    if fmt == "json":
        _emit(json.dumps(row, indent=2) + "\n", out)
    else:
        _emit(_csv_text(list(row), [list(row.values())]), out)


@cli.command()
@click.option("--epsilon", type=float, required=True, help="Rescaled energy > 1.")
@_state_options
@_ell_z_option
@_couplings_option
@click.option("--rho-min", type=float, default=None,
              help="First grid point (default: one grid step, rho-max/(points-1)).")
@click.option("--rho-max", type=float, default=10.0, show_default=True)
@click.option("--points", type=int, default=101, show_default=True)
@click.option("--columns", default=",".join(PROFILE_COLUMNS), show_default=True,
              help="Subset of psi2,n,phi,az,I.")
@click.option("--format", "fmt", type=click.Choice(["csv"]), default="csv", show_default=True)
@_out_option
def profile(epsilon, beta, theta, phi, ell_z, couplings_name, rho_min, rho_max, points, columns,
            fmt, out):
    """Radial profiles of the density and potentials as CSV."""
    params = _build_state(epsilon, beta, theta, phi, ell_z)
    couplings = _couplings(couplings_name, ell_z)
    cols = [c.strip() for c in columns.split(",") if c.strip()]
    unknown = [c for c in cols if c not in PROFILE_COLUMNS]
    if not cols or unknown:
        raise click.BadParameter(f"unknown columns {unknown}; choose from {PROFILE_COLUMNS}",
                                 param_hint="--columns")
    if points < 2:
        raise click.BadParameter("need at least 2 points", param_hint="--points")
    if not (math.isfinite(rho_max) and rho_max > 0.0):
        raise click.BadParameter("must be > 0", param_hint="--rho-max")
    if rho_min is None:
        rho_min = rho_max / (points - 1)
    if not (rho_min > 0.0 and rho_min < rho_max):
        raise click.BadParameter("must satisfy 0 < rho-min < rho-max", param_hint="--rho-min")
    rho = np.linspace(rho_min, rho_max, points)
    tilde = tilde_closed_form(params)
    potentials = make_potentials(params, couplings, tilde)
    psi2 = radial_psi_sq(params, rho)
    data = {
        "psi2": psi2,
        "n": tilde.n_t * psi2,
        "phi": potentials.phi(rho),
        "az": potentials.a_z(rho),
        "I": potential_integral_special(params.q_perp, rho),
    }
    rows = zip(rho, *(np.atleast_1d(data[c]) for c in cols))
    _emit(_csv_text(["rho", *cols], rows), out)


@cli.command()
@click.option("--epsilon-min", type=float, required=True)
@click.option("--epsilon-max", type=float, required=True)
@click.option("--steps", type=int, required=True, help="Number of energies, >= 2.")
@click.option("--format", "fmt", type=click.Choice(["csv"]), default="csv", show_default=True)
@_out_option
def scan(epsilon_min, epsilon_max, steps, fmt, out):
    """Solve the consistency conditions over a range of energies."""
    _require_epsilon(epsilon_min, "--epsilon-min")
    if not (math.isfinite(epsilon_max) and epsilon_max > epsilon_min):
        raise click.BadParameter("must exceed --epsilon-min", param_hint="--epsilon-max")
    if steps < 2:
        raise click.BadParameter("must be >= 2", param_hint="--steps")
    rows = []
    for eps in np.linspace(epsilon_min, epsilon_max, steps):
        try:
            rep = solve_consistency(float(eps))
        except ConvergenceError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        rows.append((eps, rep.beta_star, rep.q_z_star, rep.q_perp_star, rep.residual_norm))
    _emit(_csv_text(["epsilon", "beta", "q_z", "q_perp", "residual"], rows), out)


@cli.command()
@click.option("--epsilon", type=float, required=True, help="Rescaled energy > 1.")
@_state_options
@_ell_z_option
@_couplings_option
@click.option("--mode", type=click.Choice(["free", "interacting"]), default="interacting",
              show_default=True)
@click.option("--grid", "grid_spec", default=None,
              help="rho_min,rho_max,points (default 1e-3,20/q_perp,2048).")
@click.option("--deriv", type=click.Choice(["analytic", "fd"]), default="analytic", show_default=True)
@click.option("--alpha", type=float, default=0.3, show_default=True, help="Azimuth of the cut.")
@click.option("--profile", "with_profile", is_flag=True,
              help="Write the per-rho residual as CSV; the norm goes to stderr.")
@_out_option
def residual(epsilon, beta, theta, phi, ell_z, couplings_name, mode, grid_spec, deriv, alpha,
             with_profile, out):
    """Relative residual of the free or interacting Dirac equation."""
    params = _build_state(epsilon, beta, theta, phi, ell_z)
    couplings = _couplings(couplings_name, ell_z)
    mode_name = "analytic" if deriv == "analytic" else "central_fd"
    try:
        if grid_spec is None:
            grid = default_grid(params, mode_name)
        else:
            lo, hi, n = grid_spec.split(",")
            n_float = float(n)
            if n_float != int(n_float):
                raise GridError(f"points must be an integer, got {n}")
            grid = GridSpec(float(lo), float(hi), int(n_float), mode_name)
    except (ValueError, GridError) as exc:
        raise click.BadParameter(str(exc), param_hint="--grid") from exc
    if mode == "free":
        rel, prof = free_dirac_residual(params, grid, alpha=alpha)
    else:
        rel, prof = interacting_dirac_residual(params, couplings, grid, alpha=alpha)
    if with_profile:
        _emit(_csv_text(["rho", "residual"], zip(prof.rho, prof.values)), out)
        click.echo(f"rel_norm={_fmt(rel)}", err=True)
    else:
        _emit(_fmt(rel) + "\n", out)


def main(argv=None):
    cli.main(args=argv, prog_name="axialdirac")


if __name__ == "__main__":
    main()
