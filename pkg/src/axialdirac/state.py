"""The semi-localized axial ansatz.

Units: lengths in Compton wavelengths, energies in mc^2.  A state is fixed by
the rescaled energy ``epsilon``, the localization rapidity ``beta`` (with
``tanh(beta/2) = q_perp / q_z``), the spin angles ``theta`` and ``phi`` and the
longitudinal quantization length ``ell_z``.  The bispinor is::

    Psi = psi(rho) exp(i (q_z z - epsilon t)) (w1 e^{-ia/2}, w2 e^{ia/2}, v1 e^{-ia/2}, v2 e^{ia/2})

with ``psi(rho) ~ exp(-q_perp rho) / sqrt(rho)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import SpinorPair
from .errors import DomainError, GridError

__all__ = [
    "StateParams",
    "CylPoint",
    "RadialProfile",
    "make_state",
    "self_consistent_state",
    "spinor_w",
    "spinor_v",
    "spinor_v_from_wavenumbers",
    "momentum_matrix",
    "radial_psi_sq",
    "radial_psi",
    "radial_psi_derivative",
    "half_phases",
    "eval_bispinor",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class StateParams:
    epsilon: float
    beta: float
    theta: float
    phi: float
    ell_z: float = 1.0

    def __post_init__(self):
        for name in ("epsilon", "beta", "theta", "phi", "ell_z"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if not self.epsilon > 1.0:
            raise DomainError(f"epsilon must be > 1, got {self.epsilon}")
        if not self.beta > 0.0:
            raise DomainError(f"beta must be > 0, got {self.beta}")
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < TWO_PI:
            raise DomainError(f"phi must lie in [0, 2pi), got {self.phi}")
        if not self.ell_z > 0.0:
            raise DomainError(f"ell_z must be > 0, got {self.ell_z}")

    @cached_property
    def momentum(self) -> float:
        """sqrt(epsilon^2 - 1), the free momentum scale."""
        return math.sqrt((self.epsilon - 1.0) * (self.epsilon + 1.0))

    @cached_property
    def q_z(self) -> float:
        return self.momentum * math.cosh(0.5 * self.beta)

    @cached_property
    def q_perp(self) -> float:
        return self.momentum * math.sinh(0.5 * self.beta)

    @cached_property
    def lower_ratio(self) -> float:
        """sqrt((epsilon - 1) / (epsilon + 1))."""
        return math.sqrt((self.epsilon - 1.0) / (self.epsilon + 1.0))

    def replace(self, **changes) -> StateParams:
        fields = dict(epsilon=self.epsilon, beta=self.beta, theta=self.theta,
                      phi=self.phi, ell_z=self.ell_z)
        fields.update(changes)
        return StateParams(**fields)


@dataclass(frozen=True)
class CylPoint:
    rho: float
    alpha: float = 0.0
    z: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        if not self.rho > 0.0:
            raise DomainError(f"rho must be > 0 (the axis is singular), got {self.rho}")


@dataclass(frozen=True)
class RadialProfile:
    """Values sampled on a strictly increasing, positive radial grid."""

    rho: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float)
        values = np.asarray(self.values)
        if rho.ndim != 1 or rho.shape[0] != values.shape[0]:
            raise GridError("grid and values must be 1-D sequences of equal length")
        if rho.size and (rho[0] <= 0.0 or np.any(np.diff(rho) <= 0.0)):
            raise GridError("radial grid must be strictly increasing and positive")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.rho.shape[0]

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self) else 0.0


def make_state(epsilon, beta, theta, phi, ell_z=1.0) -> StateParams:
    """Validated state parameters; raises ``DomainError`` naming the violated bound."""
    return StateParams(epsilon, beta, theta, phi, ell_z)


def self_consistent_state(epsilon: float, ell_z: float = 1.0) -> StateParams:
    """The field-consistent state: theta = pi/2, phi = 3pi/2, tanh(beta/2) = 1/epsilon."""
    if not epsilon > 1.0:
        raise DomainError(f"epsilon must be > 1, got {epsilon}")
    return StateParams(epsilon, 2.0 * math.atanh(1.0 / epsilon), 0.5 * math.pi,
                       1.5 * math.pi, ell_z)


def spinor_w(params: StateParams) -> SpinorPair:
    half = 0.5 * params.theta
    return SpinorPair(math.cos(half), math.sin(half) * complex(math.cos(params.phi),
                                                               math.sin(params.phi)))


def spinor_v(params: StateParams, w: SpinorPair | None = None) -> SpinorPair:
    """Lower pair from the cosh/sinh form of the free Dirac relation."""
    w = spinor_w(params) if w is None else w
    ch = math.cosh(0.5 * params.beta)
    sh = math.sinh(0.5 * params.beta)
    s = params.lower_ratio
    return SpinorPair(s * (ch * w.c1 + 1j * sh * w.c2),
                      s * (1j * sh * w.c1 - ch * w.c2))


def momentum_matrix(params: StateParams) -> np.ndarray:
    """Q = [[q_z, i q_perp], [i q_perp, -q_z]], the action of sigma.p on the ansatz."""
    qz, qp = params.q_z, params.q_perp
    return np.array([[qz, 1j * qp], [1j * qp, -qz]], dtype=complex)


def spinor_v_from_wavenumbers(params: StateParams, w: SpinorPair | None = None) -> SpinorPair:
    """Lower pair as Q w / (epsilon + 1); algebraically equal to :func:`spinor_v`."""
    w = spinor_w(params) if w is None else w
    return SpinorPair.from_array(momentum_matrix(params) @ w.as_array() / (params.epsilon + 1.0))


def _tilde_density(params: StateParams) -> float:
    st = math.sin(params.theta) * math.sin(params.phi)
    s2 = (params.epsilon - 1.0) / (params.epsilon + 1.0)
    return 1.0 + s2 * (math.cosh(params.beta) - math.sinh(params.beta) * st)


def _check_rho(rho):
    rho = np.asarray(rho, dtype=float)
    if np.any(~(rho > 0.0)):
        raise DomainError("rho must be > 0 (the axis is singular)")
    return rho


def radial_psi_sq(params: StateParams, rho):
    """|psi(rho)|^2 in units of 1/lambda_c^3, normalized to one particle per ``ell_z``.

    The one-particle normalization requires the integral of n = n_tilde |psi|^2 over
    the transverse plane times ``ell_z`` to be one, which fixes::

        |psi|^2 = (2 / n_tilde) * q_perp / (2 pi ell_z) * exp(-2 q_perp rho) / rho

    For the field-consistent state n_tilde = 2 and the prefactor ``2 / n_tilde`` is 1.
    Accepts scalars or arrays.
    """
    rho = _check_rho(rho)
    qp = params.q_perp
    pref = (2.0 / _tilde_density(params)) * qp / (TWO_PI * params.ell_z)
    out = pref * np.exp(-2.0 * qp * rho) / rho
    return float(out) if out.ndim == 0 else out


def radial_psi(params: StateParams, rho):
    """Positive square root of :func:`radial_psi_sq` (the constant C is taken real)."""
    return np.sqrt(radial_psi_sq(params, rho))


def radial_psi_derivative(params: StateParams, rho):
    """d psi / d rho = -(q_perp + 1/(2 rho)) psi."""
    rho = _check_rho(rho)
    return -(params.q_perp + 0.5 / rho) * radial_psi(params, rho)


def half_phases(alpha):
    """Azimuthal factors (e^{-i alpha/2}, e^{+i alpha/2})."""
    alpha = np.asarray(alpha, dtype=float)
    return np.exp(-0.5j * alpha), np.exp(0.5j * alpha)


def eval_bispinor(params: StateParams, point: CylPoint,
                  spinors: tuple[SpinorPair, SpinorPair] | None = None) -> np.ndarray:
    """Four complex amplitudes of the state at ``point``.

    ``spinors`` overrides the constructed (w, v) pair, e.g. to probe a perturbed state.
    """
    if not point.rho > 0.0:
        raise DomainError("rho must be > 0")
    if spinors is None:
        w = spinor_w(params)
        v = spinor_v(params, w)
    else:
        w, v = spinors
    minus, plus = half_phases(point.alpha)
    amp = radial_psi(params, point.rho) * np.exp(1j * (params.q_z * point.z
                                                       - params.epsilon * point.t))
    return amp * np.array([w.c1 * minus, w.c2 * plus, v.c1 * minus, v.c2 * plus],
                          dtype=complex)
