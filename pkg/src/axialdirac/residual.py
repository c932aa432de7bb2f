"""Free and interacting Dirac operators applied to the axial state on a radial grid.

The z, t and azimuthal dependences of the ansatz are exact exponentials, so
their derivatives are applied analytically; only d/drho is taken numerically
(``central_fd``) or from the closed form (``analytic``).  The transverse part of
sigma.grad uses the cylindrical form::

    sigma.grad = [[d_z, e^{-ia}(d_rho - (i/rho) d_a)], [e^{ia}(d_rho + (i/rho) d_a), -d_z]]
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import SpinorPair, gamma
from .errors import GridError
from .fields import Couplings, make_potentials, potential_integral_special
from .observables import tilde_closed_form
from .state import (RadialProfile, StateParams, half_phases, radial_psi,
                    radial_psi_derivative, spinor_v, spinor_w)

__all__ = [
    "GridSpec",
    "default_grid",
    "free_dirac_residual",
    "interacting_dirac_residual",
    "potential_scale",
]

_G0 = gamma(0)
_GZ = gamma("z")
# d/d alpha acting on the half-integer phases (e^{-ia/2}, e^{ia/2}) of each pair
_DALPHA = np.array([-0.5j, 0.5j, -0.5j, 0.5j])


@dataclass(frozen=True)
class GridSpec:
    rho_min: float
    rho_max: float
    points: int = 2048
    derivative_mode: str = "analytic"

    def __post_init__(self):
        if not (math.isfinite(self.rho_min) and self.rho_min > 0.0):
            raise GridError(f"rho_min must be > 0, got {self.rho_min}")
        if not (math.isfinite(self.rho_max) and self.rho_max > self.rho_min):
            raise GridError(f"rho_max must exceed rho_min, got {self.rho_max}")
        if int(self.points) != self.points or self.points < 16:
            raise GridError(f"points must be an integer >= 16, got {self.points}")
        if self.derivative_mode not in ("analytic", "central_fd"):
            raise GridError(f"derivative_mode must be analytic or central_fd, "
                            f"got {self.derivative_mode!r}")

    @property
    def h(self) -> float:
        return (self.rho_max - self.rho_min) / (self.points - 1)

    def nodes(self) -> np.ndarray:
        return np.linspace(self.rho_min, self.rho_max, int(self.points))

    def refined(self) -> GridSpec:
        """Same interval with half the spacing."""
        return GridSpec(self.rho_min, self.rho_max, 2 * self.points - 1, self.derivative_mode)


def default_grid(params: StateParams, derivative_mode: str = "analytic") -> GridSpec:
    return GridSpec(1e-3, 20.0 / params.q_perp, 2048, derivative_mode)


def _trapezoid_weights(rho: np.ndarray) -> np.ndarray:
    # cylindrical measure rho d rho
    w = np.zeros_like(rho)
    dr = np.diff(rho)
    w[:-1] += 0.5 * dr
    w[1:] += 0.5 * dr
    return w * rho


def _weighted_norm(values: np.ndarray, weights: np.ndarray) -> float:
    sq = np.sum(np.abs(values) ** 2, axis=-1) if values.ndim > 1 else np.abs(values) ** 2
    return math.sqrt(math.fsum(sq * weights))


def _spinors(params, spinors):
    if spinors is None:
        w = spinor_w(params)
        return w, spinor_v(params, w)
    return spinors


def _state_and_derivative(params: StateParams, grid: GridSpec, alpha: float, spinors):
    """Psi and d Psi / d rho on the grid at azimuth ``alpha`` (z = t = 0)."""
    rho = grid.nodes()
    w, v = _spinors(params, spinors)
    minus, plus = half_phases(alpha)
    angular = np.array([w.c1 * minus, w.c2 * plus, v.c1 * minus, v.c2 * plus], dtype=complex)
    psi = radial_psi(params, rho)
    if grid.derivative_mode == "analytic":
        dpsi = radial_psi_derivative(params, rho)
    else:
        dpsi = np.gradient(psi, grid.h, edge_order=2)
    return rho, psi[:, None] * angular[None, :], dpsi[:, None] * angular[None, :]


def _sigma_grad(chi: np.ndarray, dchi_rho: np.ndarray, dchi_alpha: np.ndarray,
                dchi_z: np.ndarray, rho: np.ndarray, alpha: float) -> np.ndarray:
    """Cylindrical sigma.grad on a two-component field sampled along rho."""
    em, ep = np.exp(-1j * alpha), np.exp(1j * alpha)
    r = rho
    top = dchi_z[:, 0] + em * (dchi_rho[:, 1] - 1j * dchi_alpha[:, 1] / r)
    bottom = ep * (dchi_rho[:, 0] + 1j * dchi_alpha[:, 0] / r) - dchi_z[:, 1]
    return np.stack([top, bottom], axis=1)


def _free_operator(params: StateParams, rho, psi, dpsi, alpha: float) -> np.ndarray:
    """(epsilon gamma^0 - p.gamma - 1) Psi with p = -i grad."""
    d_alpha = psi * _DALPHA[None, :]
    d_z = 1j * params.q_z * psi
    upper, lower = slice(0, 2), slice(2, 4)
    # p.gamma Psi = ((sigma.p) v, -(sigma.p) w) in the standard representation
    sp_v = -1j * _sigma_grad(psi[:, lower], dpsi[:, lower], d_alpha[:, lower], d_z[:, lower], rho, alpha)
    sp_w = -1j * _sigma_grad(psi[:, upper], dpsi[:, upper], d_alpha[:, upper], d_z[:, upper], rho, alpha)
    pgamma = np.concatenate([sp_v, -sp_w], axis=1)
    return params.epsilon * psi @ _G0.T - pgamma - psi


def free_dirac_residual(params: StateParams, grid: GridSpec | None = None, alpha: float = 0.3,
                        spinors: tuple[SpinorPair, SpinorPair] | None = None):
    """Relative residual of the free Dirac equation for the axial state.

    Returns ``(rel_norm, profile)`` where the profile holds |R(rho)| and the norm is the
    ratio of rho-weighted L2 norms of R and Psi over the grid.
    """
    grid = default_grid(params) if grid is None else grid
    rho, psi, dpsi = _state_and_derivative(params, grid, alpha, spinors)
    res = _free_operator(params, rho, psi, dpsi, alpha)
    weights = _trapezoid_weights(rho)
    rel = _weighted_norm(res, weights) / _weighted_norm(psi, weights)
    return rel, RadialProfile(rho, np.sqrt(np.sum(np.abs(res) ** 2, axis=1)))


def interacting_dirac_residual(params: StateParams, couplings: Couplings,
                               grid: GridSpec | None = None, alpha: float = 0.3,
                               spinors: tuple[SpinorPair, SpinorPair] | None = None):
    """Relative residual of ((eps - phi) g0 - (p - a_z z).g - 1) Psi with self-generated fields."""
    grid = default_grid(params) if grid is None else grid
    rho, psi, dpsi = _state_and_derivative(params, grid, alpha, spinors)
    potentials = make_potentials(params, couplings, tilde_closed_form(params))
    phi = potentials.phi(rho)
    a_z = potentials.a_z(rho)
    res = (_free_operator(params, rho, psi, dpsi, alpha)
           - phi[:, None] * (psi @ _G0.T)
           + a_z[:, None] * (psi @ _GZ.T))
    weights = _trapezoid_weights(rho)
    rel = _weighted_norm(res, weights) / _weighted_norm(psi, weights)
    return rel, RadialProfile(rho, np.sqrt(np.sum(np.abs(res) ** 2, axis=1)))


def potential_scale(params: StateParams, couplings: Couplings, grid: GridSpec | None = None) -> float:
    """(alpha_f / ell_z) times the psi-weighted RMS of I(rho) over the grid."""
    grid = default_grid(params) if grid is None else grid
    rho = grid.nodes()
    weights = _trapezoid_weights(rho) * radial_psi(params, rho) ** 2
    integral = potential_integral_special(params.q_perp, rho)
    return couplings.strength * math.sqrt(math.fsum(integral**2 * weights) / math.fsum(weights))
