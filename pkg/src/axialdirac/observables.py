"""Density and current prefactors of the axial state, plus normalization and width."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .algebra import gamma
from .errors import DomainError, QuadratureError
from .state import CylPoint, StateParams, eval_bispinor, radial_psi_sq

__all__ = [
    "TildeFactors",
    "tilde_closed_form",
    "tilde_from_bilinears",
    "bilinears_at",
    "azimuthal_spread",
    "normalization",
    "width_diagnostics",
]

_G0 = gamma(0)
# alpha-matrices gamma^0 gamma^k: the flux is Psi^dagger (gamma^0 gamma^k) Psi
_ALPHA = [_G0 @ gamma(k) for k in ("x", "y", "z")]


@dataclass(frozen=True)
class TildeFactors:
    """rho-independent prefactors of n and nu once |psi(rho)|^2 is divided out."""

    n_t: float
    nu_z: float
    nu_alpha: float
    nu_r: float

    def as_array(self) -> np.ndarray:
        return np.array([self.n_t, self.nu_z, self.nu_alpha, self.nu_r])


def tilde_closed_form(params: StateParams) -> TildeFactors:
    eps, beta = params.epsilon, params.beta
    st = math.sin(params.theta) * math.sin(params.phi)
    s2 = (eps - 1.0) / (eps + 1.0)
    s = math.sqrt(s2)
    ch, sh = math.cosh(0.5 * beta), math.sinh(0.5 * beta)
    return TildeFactors(
        n_t=1.0 + s2 * (math.cosh(beta) - math.sinh(beta) * st),
        nu_z=2.0 * s * (ch - sh * st),
        nu_alpha=2.0 * s * sh * math.cos(params.theta),
        nu_r=0.0,
    )


def bilinears_at(params: StateParams, point: CylPoint) -> TildeFactors:
    """n and the cylindrical flux components at one point, divided by |psi|^2.

    n = Psi-bar gamma^0 Psi and nu_k = Psi-bar gamma^k Psi, with the transverse flux
    projected on the local unit vectors: nu_r = nu_x cos a + nu_y sin a and
    nu_alpha = -nu_x sin a + nu_y cos a.
    """
    psi = eval_bispinor(params, point)
    scale = radial_psi_sq(params, point.rho)
    n = float(np.vdot(psi, psi).real) / scale
    nx, ny, nz = (float(np.vdot(psi, a @ psi).real) / scale for a in _ALPHA)
    ca, sa = math.cos(point.alpha), math.sin(point.alpha)
    return TildeFactors(n_t=n, nu_z=nz, nu_alpha=-nx * sa + ny * ca, nu_r=nx * ca + ny * sa)


def tilde_from_bilinears(params: StateParams, rho: float = 1.0, alpha: float = 0.0) -> TildeFactors:
    """Tilde factors computed from the constructed bispinor rather than the closed form."""
    return bilinears_at(params, CylPoint(rho=rho, alpha=alpha))


def azimuthal_spread(params: StateParams, n_azimuths: int = 8, rho: float = 1.0) -> float:
    """Largest componentwise deviation of the bilinear factors over ``n_azimuths`` angles."""
    alphas = np.linspace(0.0, 2.0 * math.pi, n_azimuths, endpoint=False)
    rows = np.array([tilde_from_bilinears(params, rho, a).as_array() for a in alphas])
    return float(np.max(rows.max(axis=0) - rows.min(axis=0)))


def normalization(params: StateParams, rho_max: float | None = None,
                  quadrature_tol: float = 1e-12) -> float:
    """Number of particles per ``ell_z``: the integral of n 2 pi rho d rho times ell_z.

    ``rho_max`` defaults to 40 / q_perp; it must satisfy rho_max * q_perp >= 20 so that
    the neglected tail exp(-2 q_perp rho_max) stays below 5e-18.
    """
    qp = params.q_perp
    if rho_max is None:
        rho_max = 40.0 / qp
    if rho_max * qp < 20.0:
        raise DomainError(f"rho_max={rho_max} too small: need rho_max * q_perp >= 20")
    n_t = tilde_closed_form(params).n_t

    def density(rho):
        return n_t * radial_psi_sq(params, rho) * 2.0 * math.pi * rho * params.ell_z

    # split at the decay length so the adaptive rule resolves the exponential
    knots = [0.0, 1.0 / qp, 5.0 / qp, rho_max]
    total, err = 0.0, 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        val, e = integrate.quad(density, a, b, epsabs=quadrature_tol / 3, epsrel=0.0, limit=200)
        total += val
        err += e
    if err > quadrature_tol:
        raise QuadratureError("normalization integral did not converge", err)
    return total


def width_diagnostics(params: StateParams) -> tuple[float, float, float]:
    """(mean, rms, e-folding length) of the radial probability 2 q e^{-2 q rho}."""
    qp = params.q_perp
    return 0.5 / qp, 1.0 / (math.sqrt(2.0) * qp), 1.0 / qp
