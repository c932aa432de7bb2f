"""Numerical verification of a semi-localized axial solution of the Dirac equation.

The state propagates freely along z and is exponentially localized in the
transverse plane.  The package builds the state, its charge and current
densities and self-generated potentials, solves the conditions under which the
state is consistent with its own field, and measures residuals of the free and
interacting Dirac equations.
"""

__version__ = "0.1.0"

from .algebra import SpinorPair, gamma, nullspace_test, pauli
from .consistency import (ConsistencyReport, closed_form_solution, condition_residuals,
                          eq11_matrices, solve_consistency, uniqueness_scan)
from .errors import (ConfigurationError, ConvergenceError, DomainError, GridError,
                     QuadratureError)
from .fields import (PHYSICS, TEST, Couplings, FieldPotentials, make_potentials, ode_residual,
                     potential_integral_quadrature, potential_integral_special)
from .observables import (TildeFactors, normalization, tilde_closed_form, tilde_from_bilinears,
                          width_diagnostics)
from .residual import GridSpec, free_dirac_residual, interacting_dirac_residual
from .state import (CylPoint, RadialProfile, StateParams, eval_bispinor, make_state,
                    radial_psi_sq, self_consistent_state, spinor_v, spinor_w)

__all__ = [
    "__version__",
    "SpinorPair", "gamma", "nullspace_test", "pauli",
    "ConsistencyReport", "closed_form_solution", "condition_residuals", "eq11_matrices",
    "solve_consistency", "uniqueness_scan",
    "ConfigurationError", "ConvergenceError", "DomainError", "GridError", "QuadratureError",
    "PHYSICS", "TEST", "Couplings", "FieldPotentials", "make_potentials", "ode_residual",
    "potential_integral_quadrature", "potential_integral_special",
    "TildeFactors", "normalization", "tilde_closed_form", "tilde_from_bilinears",
    "width_diagnostics",
    "GridSpec", "free_dirac_residual", "interacting_dirac_residual",
    "CylPoint", "RadialProfile", "StateParams", "eval_bispinor", "make_state", "radial_psi_sq",
    "self_consistent_state", "spinor_v", "spinor_w",
]
