"""Self-generated potentials of the axial state.

Both the scalar potential and the axial vector potential share the radial factor::

    I(rho) = integral_0^rho (1 - exp(-2 q_perp x)) / x dx = gamma_E + ln(2 q_perp rho) + E1(2 q_perp rho)

so that phi(rho) = -(alpha_f / ell_z) n_tilde I(rho) and a_z(rho) = -(alpha_f / ell_z) nu_z I(rho).
The potentials vanish on the axis and grow logarithmically at large rho, as for a
line source; no regularization is applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import DomainError, GridError, QuadratureError
from .observables import TildeFactors
from .state import RadialProfile, StateParams

__all__ = [
    "ALPHA_F_CODATA",
    "Couplings",
    "PHYSICS",
    "TEST",
    "couplings_profile",
    "FieldPotentials",
    "exp1",
    "ein",
    "potential_integral_quadrature",
    "potential_integral_special",
    "make_potentials",
    "ode_residual",
]

# CODATA 2018 recommended value.
ALPHA_F_CODATA = 7.2973525693e-3

_EULER_GAMMA = 0.57721566490153286061
_TINY = 1e-300


@dataclass(frozen=True)
class Couplings:
    alpha_f: float
    ell_z: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.alpha_f) and self.alpha_f >= 0.0):
            raise DomainError(f"alpha_f must be finite and >= 0, got {self.alpha_f}")
        if not (math.isfinite(self.ell_z) and self.ell_z > 0.0):
            raise DomainError(f"ell_z must be > 0, got {self.ell_z}")

    @property
    def strength(self) -> float:
        return self.alpha_f / self.ell_z


PHYSICS = Couplings(ALPHA_F_CODATA, 1.0)
TEST = Couplings(1.0, 1.0)


def couplings_profile(name: str, ell_z: float | None = None) -> Couplings:
    """Named coupling profile: ``"physics"`` (CODATA alpha_f) or ``"test"`` (alpha_f = 1)."""
    base = {"physics": PHYSICS, "test": TEST}.get(name)
    if base is None:
        raise DomainError(f"unknown couplings profile {name!r}; expected physics or test")
    return base if ell_z is None else Couplings(base.alpha_f, ell_z)


def ein(x):
    """Entire exponential integral Ein(x) = sum_{k>=1} (-1)^{k+1} x^k / (k k!).

    Power series; intended for |x| < 1 where it converges to full precision in
    under 20 terms.
    """
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    term = np.ones_like(x)  # (-1)^{k+1} x^k / k!
    for k in range(1, 40):
        term = term * (-x) / k if k > 1 else x.copy()
        contrib = term / k
        total = total + contrib
        if np.all(np.abs(contrib) <= 1e-17 * np.maximum(np.abs(total), _TINY)):
            break
    return total


def _exp1_continued_fraction(x: np.ndarray) -> np.ndarray:
    # modified Lentz evaluation of e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    b = x + 1.0
    c = np.full_like(x, 1.0 / _TINY)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, 500):
        an = -float(i * i)
        b = b + 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h = h * delta
        if np.all(np.abs(delta - 1.0) <= 1e-16):
            break
    return h * np.exp(-x)


def exp1(x):
    """Exponential integral E1(x) for x > 0.

    Series (through Ein) below 1, continued fraction from 1 upwards.
    """
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0.0)):
        raise DomainError("E1 is evaluated for positive arguments only")
    out = np.empty_like(x)
    small = x < 1.0
    if np.any(small):
        xs = x[small]
        out[small] = -_EULER_GAMMA - np.log(xs) + ein(xs)
    if np.any(~small):
        out[~small] = _exp1_continued_fraction(x[~small])
    return float(out) if out.ndim == 0 else out


def _integrand(q_perp: float) -> Callable[[float], float]:
    def f(x):
        if x == 0.0:
            return 2.0 * q_perp
        return -math.expm1(-2.0 * q_perp * x) / x
    return f


def potential_integral_quadrature(q_perp: float, rho: float, tol: float = 1e-12) -> float:
    """I(rho) by adaptive Gauss-Kronrod quadrature with absolute error <= ``tol``."""
    if not q_perp > 0.0:
        raise DomainError(f"q_perp must be > 0, got {q_perp}")
    if not rho >= 0.0:
        raise DomainError(f"rho must be >= 0, got {rho}")
    if not tol > 0.0:
        raise DomainError("tol must be positive")
    if rho == 0.0:
        return 0.0
    value, err = integrate.quad(_integrand(q_perp), 0.0, rho, epsabs=tol, epsrel=0.0, limit=500)
    if err > tol:
        raise QuadratureError(f"I({rho}) with q_perp={q_perp}", err)
    return value


def potential_integral_special(q_perp: float, rho):
    """I(rho) = gamma_E + ln(2 q rho) + E1(2 q rho); accepts scalars or arrays.

    Below 2 q rho = 1 the sum is formed as Ein(2 q rho) directly, which is the same
    function without the cancellation between the logarithm and E1.
    """
    if not q_perp > 0.0:
        raise DomainError(f"q_perp must be > 0, got {q_perp}")
    rho = np.asarray(rho, dtype=float)
    if np.any(~(rho > 0.0)):
        raise DomainError("rho must be > 0 for the logarithmic form")
    x = 2.0 * q_perp * rho
    out = np.empty_like(x)
    small = x < 1.0
    if np.any(small):
        out[small] = ein(x[small])
    if np.any(~small):
        xl = x[~small]
        out[~small] = _EULER_GAMMA + np.log(xl) + _exp1_continued_fraction(xl)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class FieldPotentials:
    """Rescaled potentials phi = e Phi / mc^2 and a_z = e A_z / mc as functions of rho."""

    phi: Callable
    a_z: Callable


@dataclass(frozen=True)
class _SharedRadial:
    coeff: float
    q_perp: float

    def __call__(self, rho):
        rho_arr = np.asarray(rho, dtype=float)
        out = np.zeros_like(rho_arr)
        pos = rho_arr > 0.0
        if np.any(pos):
            out[pos] = self.coeff * potential_integral_special(self.q_perp, rho_arr[pos])
        return float(out) if out.ndim == 0 else out


def make_potentials(params: StateParams, couplings: Couplings, tilde: TildeFactors) -> FieldPotentials:
    g = couplings.strength
    return FieldPotentials(phi=_SharedRadial(-g * tilde.n_t, params.q_perp),
                           a_z=_SharedRadial(-g * tilde.nu_z, params.q_perp))


def sources(params: StateParams, couplings: Couplings, tilde: TildeFactors, rho):
    """Right-hand sides S_phi, S_a of  f'' + f'/rho + S = 0."""
    rho = np.asarray(rho, dtype=float)
    qp = params.q_perp
    shape = 2.0 * couplings.strength * qp * np.exp(-2.0 * qp * rho) / rho
    return tilde.n_t * shape, tilde.nu_z * shape


def validate_uniform_grid(rho_grid, min_points: int = 5) -> tuple[np.ndarray, float]:
    rho = np.asarray(rho_grid, dtype=float)
    if rho.ndim != 1 or rho.size < min_points:
        raise GridError(f"need a 1-D grid with at least {min_points} points")
    if rho[0] <= 0.0:
        raise GridError("grid must lie strictly inside (0, inf)")
    steps = np.diff(rho)
    h = float(steps.mean())
    if np.any(steps <= 0.0) or np.max(np.abs(steps - h)) > 1e-9 * max(h, abs(rho[-1])):
        raise GridError("grid must be strictly increasing with uniform spacing")
    return rho, h


def ode_residual(params: StateParams, couplings: Couplings, tilde: TildeFactors, rho_grid,
                 potentials: FieldPotentials | None = None) -> tuple[RadialProfile, RadialProfile]:
    """Central-difference residuals of the two radial Poisson equations.

    Evaluates f'' + f'/rho + S at the interior grid points for f = phi and f = a_z.
    With the closed-form potentials the residual is O(h^2).
    """
    rho, h = validate_uniform_grid(rho_grid)
    if potentials is None:
        potentials = make_potentials(params, couplings, tilde)
    inner = rho[1:-1]
    s_phi, s_az = sources(params, couplings, tilde, inner)
    out = []
    for f, src in ((potentials.phi, s_phi), (potentials.a_z, s_az)):
        vals = np.asarray(f(rho), dtype=float) * np.ones_like(rho)
        d2 = (vals[2:] - 2.0 * vals[1:-1] + vals[:-2]) / (h * h)
        d1 = (vals[2:] - vals[:-2]) / (2.0 * h)
        out.append(RadialProfile(inner, d2 + d1 / inner + src))
    return out[0], out[1]
