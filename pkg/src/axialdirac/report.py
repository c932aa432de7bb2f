"""Verification suite: run every numerical check and serialize the outcome as JSON."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from importlib import resources

import numpy as np

from . import __version__
from .algebra import anticommutator, gamma, identity, metric, pauli
from .consistency import (ConsistencyReport, closed_form_solution, condition_residuals,
                          solve_consistency, uniqueness_scan)
from .errors import ConfigurationError, ConvergenceError
from .fields import (ALPHA_F_CODATA, TEST, Couplings, ode_residual,
                     potential_integral_quadrature, potential_integral_special)
from .observables import normalization, tilde_closed_form, tilde_from_bilinears
from .residual import (GridSpec, free_dirac_residual, interacting_dirac_residual,
                       potential_scale)
from .state import StateParams

__all__ = [
    "CheckRecord",
    "VerificationReport",
    "ANCHORS",
    "DEFAULT_TOLERANCES",
    "run_suite",
    "load_schema",
    "validate_report",
]

# check id -> the part of the model it verifies
ANCHORS = {
    "pauli-algebra": "Pauli matrices",
    "dirac-anticommutator": "Dirac matrices (standard representation)",
    "tilde-bilinear": "density and flux bilinears vs their closed-form prefactors",
    "radial-flux-zero": "vanishing radial flux prefactor",
    "potential-crosscheck": "resolved potentials: radial integral by quadrature and E1",
    "dispersion": "dispersion relation with imaginary transverse momentum",
    "normalization": "one-particle normalization of the number density",
    "ode-residual-order": "radial Poisson equations for phi and a_z",
    "azimuthal-current-residual": "cos(theta) = 0 from the vanishing azimuthal current",
    "linear-condition-residual": "consistency condition epsilon*phi = q_z*a_z",
    "quadratic-condition-residual": "consistency condition phi^2 = q_perp^2*a_z^2",
    "spinor-nullspace-residual": "reduced spinor equations for (w1, w2)",
    "solver-closed-form": "closed-form self-consistent state (theta, phi, tanh(beta/2))",
    "qperp-claim": "transverse width equals the Compton wavelength (q_perp = 1)",
    "uniqueness": "uniqueness of the self-consistent semi-localized state",
    "free-dirac-residual": "free Dirac equation applied to the axial ansatz",
    "interacting-dirac-residual": "Dirac equation with self-generated potentials",
    "interacting-wrong-branch": "Dirac equation with self-generated potentials (off the consistent branch)",
}

# "max": pass iff value <= tol;  "min": pass iff value >= tol;
# "order": pass iff |value - 4| <= tol;  "count": pass iff value == tol
KINDS = {
    "ode-residual-order": "order",
    "uniqueness": "count",
    "interacting-wrong-branch": "min",
}

DEFAULT_TOLERANCES = {
    "pauli-algebra": 1e-15,
    "dirac-anticommutator": 1e-15,
    "tilde-bilinear": 1e-12,
    "radial-flux-zero": 1e-13,
    "potential-crosscheck": 1e-10,
    "dispersion": 1e-13,
    "normalization": 1e-8,
    "ode-residual-order": 0.5,
    "azimuthal-current-residual": 1e-13,
    "linear-condition-residual": 1e-12,
    "quadratic-condition-residual": 1e-12,
    "spinor-nullspace-residual": 1e-12,
    "solver-closed-form": 1e-9,
    "qperp-claim": 1e-9,
    "uniqueness": 1.0,
    "free-dirac-residual": 1e-12,
    "interacting-dirac-residual": 1e-12,
    "interacting-wrong-branch": 1e-4,
}

_BILINEAR_DRAWS = 200
_SEED = 20240917


@dataclass
class CheckRecord:
    id: str
    anchor: str
    status: str
    value: float | None
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class VerificationReport:
    version: str
    timestamp: str
    parameters: dict
    couplings: dict
    checks: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def failures(self) -> list[CheckRecord]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, allow_nan=False)

    @classmethod
    def from_dict(cls, data: dict) -> VerificationReport:
        return cls(
            version=data["version"],
            timestamp=data["timestamp"],
            parameters=data["parameters"],
            couplings=data["couplings"],
            checks=[CheckRecord(**c) for c in data["checks"]],
        )

    @classmethod
    def from_json(cls, text: str) -> VerificationReport:
        return cls.from_dict(json.loads(text))


def load_schema() -> dict:
    text = resources.files("axialdirac").joinpath("schemas/report.schema.json").read_text()
    return json.loads(text)


def validate_report(data: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if ``data`` does not match the report schema."""
    import jsonschema

    jsonschema.validate(data, load_schema())


def _status(check_id: str, value: float | None, tol: float) -> str:
    if value is None or not math.isfinite(value):
        return "fail"
    kind = KINDS.get(check_id, "max")
    ok = {
        "max": value <= tol,
        "min": value >= tol,
        "order": abs(value - 4.0) <= tol,
        "count": value == tol,
    }[kind]
    return "pass" if ok else "fail"


def _pauli_error() -> float:
    axes = "xyz"
    worst = 0.0
    for a in range(3):
        for b in range(3):
            expected = identity(2) * (a == b)
            for c in range(3):
                levi = np.sign((b - a) * (c - a) * (c - b))
                if levi:
                    expected = expected + 1j * levi * pauli(axes[c])
            got = pauli(axes[a]) @ pauli(axes[b])
            worst = max(worst, float(np.max(np.abs(got - expected))))
    return worst


def _gamma_error() -> float:
    g = [gamma(0), gamma("x"), gamma("y"), gamma("z")]
    eta = metric()
    worst = 0.0
    for mu in range(4):
        for nu in range(4):
            diff = anticommutator(g[mu], g[nu]) - 2.0 * eta[mu, nu] * identity(4)
            worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def _bilinear_errors() -> tuple[float, float]:
    rng = np.random.default_rng(_SEED)
    worst, radial = 0.0, 0.0
    for _ in range(_BILINEAR_DRAWS):
        params = StateParams(1.0 + rng.uniform(1e-3, 9.0), rng.uniform(1e-3, 4.0),
                             rng.uniform(0.0, math.pi), rng.uniform(0.0, 2.0 * math.pi))
        alpha = rng.uniform(0.0, 2.0 * math.pi)
        bil = tilde_from_bilinears(params, alpha=alpha)
        ref = tilde_closed_form(params)
        worst = max(worst, float(np.max(np.abs(bil.as_array() - ref.as_array()))))
        radial = max(radial, abs(bil.nu_r))
    return worst, radial


def _potential_crosscheck() -> float:
    rho = np.logspace(-3, math.log10(50.0), 25)
    worst = 0.0
    for q in (0.5, 1.0, 2.0):
        special = potential_integral_special(q, rho)
        quad = np.array([potential_integral_quadrature(q, r, tol=1e-12) for r in rho])
        worst = max(worst, float(np.max(np.abs(special - quad))))
    return worst


def _ode_order(params: StateParams, couplings: Couplings) -> float:
    tilde = tilde_closed_form(params)
    lo, hi = 0.5 / params.q_perp, 5.0 / params.q_perp
    errs = []
    for n in (401, 801):
        res_phi, res_az = ode_residual(params, couplings, tilde, np.linspace(lo, hi, n))
        errs.append(max(res_phi.max_abs(), res_az.max_abs()))
    if errs[1] == 0.0:
        # alpha_f = 0: residual vanishes identically, nothing to converge
        return 4.0
    return errs[0] / errs[1]


def _couplings_dict(couplings: Couplings) -> dict:
    if couplings == TEST:
        profile = "test"
    elif couplings.alpha_f == ALPHA_F_CODATA:
        profile = "physics"
    else:
        profile = "custom"
    return {"profile": profile, "alpha_f": couplings.alpha_f, "ell_z": couplings.ell_z}


def _validate_epsilons(epsilons) -> list[float]:
    try:
        eps_list = [float(e) for e in epsilons]
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"epsilon list is not numeric: {epsilons!r}") from exc
    if not eps_list:
        raise ConfigurationError("epsilon list is empty")
    bad = [e for e in eps_list if not (math.isfinite(e) and e > 1.0)]
    if bad:
        raise ConfigurationError(f"every epsilon must be finite and > 1; got {bad}")
    return eps_list


def _per_epsilon_checks(eps: float, couplings: Couplings, grid: GridSpec | None):
    """Yield (base id, value) for the checks tied to one energy."""
    try:
        sol: ConsistencyReport | None = solve_consistency(eps)
    except ConvergenceError:
        sol = None
    if sol is None:
        for base in ("linear-condition-residual", "quadratic-condition-residual",
                     "spinor-nullspace-residual", "azimuthal-current-residual",
                     "solver-closed-form", "qperp-claim"):
            yield base, None
        state = None
    else:
        state = StateParams(eps, sol.beta_star, sol.theta_star, sol.phi_star, couplings.ell_z)
        res = condition_residuals(state)
        tilde = tilde_closed_form(state)
        yield "azimuthal-current-residual", abs(res["r9"])
        yield "linear-condition-residual", abs(res["r13a"]) / max(1.0, eps * tilde.n_t)
        yield "quadratic-condition-residual", abs(res["r13b"]) / max(1.0, tilde.n_t**2)
        yield "spinor-nullspace-residual", max(res["r14a"], res["r14b"]) / max(1.0, tilde.n_t)
        ref_theta, ref_phi, _ = closed_form_solution(eps)
        dphi = abs(sol.phi_star - ref_phi) % (2.0 * math.pi)
        yield "solver-closed-form", max(abs(sol.theta_star - ref_theta),
                                        min(dphi, 2.0 * math.pi - dphi),
                                        abs(math.tanh(0.5 * sol.beta_star) - 1.0 / eps))
        yield "qperp-claim", abs(sol.q_perp_star - 1.0)

    yield "uniqueness", float(len(uniqueness_scan(eps)))
    if state is None:
        for base in ("dispersion", "normalization", "ode-residual-order", "free-dirac-residual",
                     "interacting-dirac-residual", "interacting-wrong-branch"):
            yield base, None
        return
    dispersion = abs(state.q_z**2 - state.q_perp**2 - (eps * eps - 1.0))
    yield "dispersion", dispersion / max(1.0, state.q_z**2)
    yield "normalization", abs(normalization(state) - 1.0)
    yield "ode-residual-order", _ode_order(state, couplings)
    yield "free-dirac-residual", free_dirac_residual(state, grid)[0]
    yield "interacting-dirac-residual", interacting_dirac_residual(state, couplings, grid)[0]
    wrong = state.replace(phi=0.5 * math.pi)
    scale = potential_scale(wrong, couplings, grid)
    if scale == 0.0:
        yield "interacting-wrong-branch", None
    else:
        yield "interacting-wrong-branch", interacting_dirac_residual(wrong, couplings, grid)[0] / scale


def run_suite(epsilons=(1.1, 2.0, 5.0, 10.0), couplings: Couplings = TEST,
              grid: GridSpec | None = None, tolerances: dict | None = None,
              tol: float | None = None) -> VerificationReport:
    """Run every check and collect the results.

    ``tolerances`` overrides individual check tolerances by id; ``tol`` replaces the
    tolerance of every upper-bound check at once.  Check failures are recorded, not
    raised; configuration problems raise ``ConfigurationError``.
    """
    eps_list = _validate_epsilons(epsilons)
    tols = dict(DEFAULT_TOLERANCES)
    if tolerances:
        unknown = set(tolerances) - set(tols)
        if unknown:
            raise ConfigurationError(f"unknown check ids in tolerances: {sorted(unknown)}")
        tols.update(tolerances)
    if tol is not None:
        if not (math.isfinite(tol) and tol > 0.0):
            raise ConfigurationError(f"tol must be a positive number, got {tol}")
        for key in tols:
            if KINDS.get(key, "max") == "max":
                tols[key] = tol

    checks: list[CheckRecord] = []

    def record(check_id: str, base: str, value):
        value = None if value is None else float(value)
        if value is not None and not math.isfinite(value):
            value = None
        checks.append(CheckRecord(check_id, ANCHORS[base], _status(base, value, tols[base]),
                                  value, tols[base]))

    record("pauli-algebra", "pauli-algebra", _pauli_error())
    record("dirac-anticommutator", "dirac-anticommutator", _gamma_error())
    bilinear, radial = _bilinear_errors()
    record("tilde-bilinear", "tilde-bilinear", bilinear)
    record("radial-flux-zero", "radial-flux-zero", radial)
    record("potential-crosscheck", "potential-crosscheck", _potential_crosscheck())
    for eps in eps_list:
        for base, value in _per_epsilon_checks(eps, couplings, grid):
            record(f"{base}@eps={eps:g}", base, value)

    parameters = {
        "epsilons": eps_list,
        "grid": None if grid is None else asdict(grid),
        "tolerances": tols,
    }
    return VerificationReport(
        version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(),
        parameters=parameters,
        couplings=_couplings_dict(couplings),
        checks=checks,
    )
