"""Self-consistency of the axial state with its own field.

With both potentials proportional to the same radial factor, the reduced 2x2
systems have a non-trivial solution w iff::

    epsilon * n_tilde = q_z * nu_z          (linear condition)
    n_tilde**2 = q_perp**2 * nu_z**2        (quadratic condition)

and the azimuthal current must vanish, cos(theta) = 0.  On theta in [0, pi] the
latter fixes theta = pi/2, leaving two equations for (phi, beta).

Root-finding notes
------------------
The conditions depend on phi only through sin(phi).  A root at sin(phi) = -1 is
therefore a double root in phi: in double precision the residual is flat to
rounding level for |phi - 3pi/2| < ~1e-8.  The solver works in the variables
u = sin(phi), t = tanh(beta/2), where the system (cleared of the 1 - t^2
denominators) is polynomial with a regular root, runs a damped Newton iteration
in floating point from a multi-start grid, and polishes the accepted root with a
few Newton steps in 40-digit arithmetic before mapping back to (phi, beta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .algebra import SpinorPair
from .errors import ConvergenceError, DomainError
from .observables import tilde_closed_form
from .state import StateParams, spinor_w

__all__ = [
    "ConsistencyReport",
    "Basin",
    "eq11_matrices",
    "condition_residuals",
    "potential_condition_residuals",
    "closed_form_solution",
    "solve_consistency",
    "uniqueness_scan",
]

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi

_POLISH_DPS = 40


@dataclass
class ConsistencyReport:
    epsilon: float
    theta_star: float
    phi_star: float
    beta_star: float
    q_perp_star: float
    residual_norm: float
    matched_closed_form: bool
    condition_residuals: dict[str, float] = field(default_factory=dict)
    start: tuple[float, float] | None = None

    @property
    def q_z_star(self) -> float:
        return math.sqrt(self.epsilon**2 - 1.0) * math.cosh(0.5 * self.beta_star)

    def as_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "theta": self.theta_star,
            "phi": self.phi_star,
            "beta": self.beta_star,
            "q_perp": self.q_perp_star,
            "residual_norm": self.residual_norm,
            "matched_closed_form": self.matched_closed_form,
        }


@dataclass(frozen=True)
class Basin:
    phi: float
    beta: float
    residual: float
    members: int


def eq11_matrices(params: StateParams, phi_val: float, az_val: float) -> tuple[np.ndarray, np.ndarray]:
    """The two reduced 2x2 systems at one radius, given the potential values there.

    M1 = [[(e+1) phi - q_z a, -i q_perp a], [i q_perp a, (e+1) phi - q_z a]]
    M2 = [[(e-1) phi - q_z a,  i q_perp a], [-i q_perp a, (e-1) phi - q_z a]]
    """
    eps, qz, qp = params.epsilon, params.q_z, params.q_perp
    d1 = (eps + 1.0) * phi_val - qz * az_val
    d2 = (eps - 1.0) * phi_val - qz * az_val
    off = 1j * qp * az_val
    m1 = np.array([[d1, -off], [off, d1]], dtype=complex)
    m2 = np.array([[d2, off], [-off, d2]], dtype=complex)
    return m1, m2


def potential_condition_residuals(params: StateParams, phi_val: float, az_val: float,
                                  w: SpinorPair | None = None) -> dict[str, float]:
    """Consistency residuals evaluated with actual potential values."""
    w = spinor_w(params) if w is None else w
    eps, qz, qp = params.epsilon, params.q_z, params.q_perp
    return {
        "r9": math.cos(params.theta),
        "r13a": eps * phi_val - qz * az_val,
        "r13b": phi_val**2 - qp**2 * az_val**2,
        "r14a": abs(phi_val * w.c1 - 1j * qp * az_val * w.c2),
        "r14b": abs(1j * qp * az_val * w.c1 + phi_val * w.c2),
    }


def condition_residuals(params: StateParams) -> dict[str, float]:
    """Residuals with the common factor -alpha_f I(rho) / ell_z divided out.

    The conditions are homogeneous in the potentials, so the tilde factors stand in
    for phi and a_z and no coupling constant enters.
    """
    tilde = tilde_closed_form(params)
    return potential_condition_residuals(params, tilde.n_t, tilde.nu_z)


def closed_form_solution(epsilon: float) -> tuple[float, float, float]:
    """(theta, phi, beta) = (pi/2, 3pi/2, 2 atanh(1/epsilon))."""
    if not epsilon > 1.0:
        raise DomainError(f"epsilon must be > 1, got {epsilon}")
    return HALF_PI, 1.5 * math.pi, 2.0 * math.atanh(1.0 / epsilon)


# -- reduced polynomial system in u = sin(phi), t = tanh(beta/2), theta = pi/2 --

def _system(eps, u, t):
    """(1 - t^2) * linear condition and (1 - t^2)^2 * quadratic condition, with Jacobian."""
    s2 = (eps - 1) / (eps + 1)
    em1 = eps - 1
    d = 1 - t * t
    a = 1 + t * t - 2 * t * u
    g1 = eps * d + eps * s2 * a - 2 * em1 * (1 - t * u)
    g1_u = -2 * eps * s2 * t + 2 * em1 * t
    g1_t = -2 * eps * t + eps * s2 * (2 * t - 2 * u) + 2 * em1 * u
    p = d + s2 * a
    p_u = -2 * s2 * t
    p_t = -2 * t + s2 * (2 * t - 2 * u)
    q = 2 * em1 * t * (1 - t * u)
    q_u = -2 * em1 * t * t
    q_t = 2 * em1 * (1 - 2 * t * u)
    g2 = p * p - q * q
    g2_u = 2 * p * p_u - 2 * q * q_u
    g2_t = 2 * p * p_t - 2 * q * q_t
    return (g1, g2), ((g1_u, g1_t), (g2_u, g2_t))


def _unscaled(eps: float, u: float, t: float) -> tuple[float, float]:
    d = 1.0 - t * t
    s2 = (eps - 1.0) / (eps + 1.0)
    n_t = 1.0 + s2 * (1.0 + t * t - 2.0 * t * u) / d
    qz_nuz = 2.0 * (eps - 1.0) * (1.0 - t * u) / d
    qp_nuz = 2.0 * (eps - 1.0) * t * (1.0 - t * u) / d
    return eps * n_t - qz_nuz, n_t * n_t - qp_nuz * qp_nuz


def _newton_float(eps: float, u: float, t: float, max_iter: int = 100):
    """Damped Newton on the polynomial system; returns (u, t) or None."""
    for _ in range(max_iter):
        (g1, g2), jac = _system(eps, u, t)
        norm = math.hypot(g1, g2)
        if norm == 0.0:
            return u, t
        try:
            du, dt = np.linalg.solve(np.array(jac, dtype=float), [-g1, -g2])
        except np.linalg.LinAlgError:
            return None
        lam = 1.0
        while lam > 1e-8:
            un, tn = u + lam * du, t + lam * dt
            if 0.0 < tn < 1.0:
                (h1, h2), _ = _system(eps, un, tn)
                if math.hypot(h1, h2) < norm * (1.0 - 1e-4 * lam):
                    break
            lam *= 0.5
        else:
            # no descent step: either converged to rounding level or stuck
            return (u, t) if abs(du) + abs(dt) < 1e-10 else None
        u, t = un, tn
        if abs(lam * du) + abs(lam * dt) < 1e-15:
            return u, t
    return u, t


def _polish(eps: float, u: float, t: float):
    """Newton steps in extended precision from a converged float root."""
    with mpmath.workdps(_POLISH_DPS):
        e = mpmath.mpf(eps)
        um, tm = mpmath.mpf(u), mpmath.mpf(t)
        for _ in range(30):
            (g1, g2), ((a, b), (c, d)) = _system(e, um, tm)
            det = a * d - b * c
            if det == 0:
                return None
            du = (-g1 * d + g2 * b) / det
            dt = (-g2 * a + g1 * c) / det
            um, tm = um + du, tm + dt
            if abs(du) + abs(dt) < mpmath.mpf(10) ** (-(_POLISH_DPS - 5)):
                break
        else:
            return None
        if not (0 < tm < 1) or abs(um) > 1 + mpmath.mpf(10) ** (-(_POLISH_DPS - 10)):
            return None
        um = max(min(um, mpmath.mpf(1)), mpmath.mpf(-1))
        return um, tm


def _circular_distance(a: float, b: float) -> float:
    d = (a - b) % TWO_PI
    return min(d, TWO_PI - d)


def _refine(eps: float, phi0: float, beta0: float):
    """Root (phi, beta, q_perp) reached from a start point, or None."""
    if beta0 <= 0.0:
        return None
    root = _newton_float(eps, math.sin(phi0), math.tanh(0.5 * beta0))
    if root is None:
        return None
    u, t = root
    if not (0.0 < t < 1.0 - 1e-14) or abs(u) > 1.0 + 1e-6:
        return None
    r1, r2 = _unscaled(eps, u, t)
    if not (math.isfinite(r1) and math.isfinite(r2)) or math.hypot(r1, r2) > 1e-6 * (1.0 + eps):
        return None
    polished = _polish(eps, u, t)
    if polished is None:
        return None
    um, tm = polished
    with mpmath.workdps(_POLISH_DPS):
        base = mpmath.asin(um)
        candidates = [float(base % (2 * mpmath.pi)), float((mpmath.pi - base) % (2 * mpmath.pi))]
        beta = float(2 * mpmath.atanh(tm))
        k = mpmath.sqrt((mpmath.mpf(eps) - 1) * (mpmath.mpf(eps) + 1))
        q_perp = float(k * tm / mpmath.sqrt(1 - tm * tm))
    candidates = [0.0 if c >= TWO_PI else c for c in candidates]
    phi = min(candidates, key=lambda c: _circular_distance(c, phi0))
    return phi, beta, q_perp


def _start_grid(n_phi: int = 8, n_beta: int = 8, beta_max: float = 4.0):
    for i in range(n_phi):
        for j in range(1, n_beta + 1):
            yield TWO_PI * i / n_phi, beta_max * j / n_beta


def _residual_scale(params: StateParams) -> float:
    tilde = tilde_closed_form(params)
    return max(1.0, params.epsilon * abs(tilde.n_t), tilde.n_t**2)


def solve_consistency(epsilon: float, solver_tol: float = 1e-12,
                      report_tol: float = 1e-9) -> ConsistencyReport:
    """Solve the consistency conditions for (theta, phi, beta) at fixed ``epsilon``.

    ``solver_tol`` bounds the residual norm relative to the magnitude of the terms
    being balanced; ``report_tol`` is the per-parameter tolerance for declaring a
    match with the closed form.
    """
    if not (math.isfinite(epsilon) and epsilon > 1.0):
        raise DomainError(f"epsilon must be > 1, got {epsilon}")
    theta = HALF_PI  # cos(theta) = 0 on [0, pi]
    best = (math.inf, None)
    for start in _start_grid():
        root = _refine(epsilon, *start)
        if root is None:
            continue
        phi, beta, q_perp = root
        params = StateParams(epsilon, beta, theta, phi)
        residuals = condition_residuals(params)
        norm = math.sqrt(sum(v * v for v in residuals.values()))
        if norm < best[0]:
            best = (norm, start)
        if norm > solver_tol * _residual_scale(params):
            continue
        ref_theta, ref_phi, ref_beta = closed_form_solution(epsilon)
        matched = (abs(theta - ref_theta) <= report_tol
                   and _circular_distance(phi, ref_phi) <= report_tol
                   and abs(math.tanh(0.5 * beta) - 1.0 / epsilon) <= report_tol)
        return ConsistencyReport(epsilon, theta, phi, beta, q_perp, norm, matched,
                                 residuals, start)
    raise ConvergenceError(f"no consistent root found at epsilon={epsilon}", best[0], best[1])


def _grid_objective(epsilon: float, phi: np.ndarray, beta: np.ndarray) -> np.ndarray:
    s2 = (epsilon - 1.0) / (epsilon + 1.0)
    k = math.sqrt((epsilon - 1.0) * (epsilon + 1.0))
    st = np.sin(phi)
    ch, sh = np.cosh(0.5 * beta), np.sinh(0.5 * beta)
    n_t = 1.0 + s2 * (np.cosh(beta) - np.sinh(beta) * st)
    nu_z = 2.0 * math.sqrt(s2) * (ch - sh * st)
    r13a = epsilon * n_t - k * ch * nu_z
    r13b = n_t**2 - (k * sh * nu_z) ** 2
    return r13a**2 + r13b**2


def uniqueness_scan(epsilon: float, n_phi: int = 128, n_beta: int = 128, beta_max: float = 5.0,
                    threshold: float = 0.1) -> list[Basin]:
    """All distinct roots reachable from grid minima of r13a^2 + r13b^2.

    The objective is sampled on phi in [0, 2pi) x beta in (0, beta_max]; grid local
    minima (periodic in phi) with objective strictly below ``threshold`` are refined
    by the root-finder and merged when they land on the same root modulo 2pi.
    """
    if not epsilon > 1.0:
        raise DomainError(f"epsilon must be > 1, got {epsilon}")
    if n_phi < 64 or n_beta < 64:
        raise DomainError("uniqueness scan needs at least a 64 x 64 grid")
    phis = TWO_PI * np.arange(n_phi) / n_phi
    betas = beta_max * np.arange(1, n_beta + 1) / n_beta
    f = _grid_objective(epsilon, phis[:, None], betas[None, :])
    padded = np.pad(np.pad(f, ((1, 1), (0, 0)), mode="wrap"), ((0, 0), (1, 1)), mode="edge")
    is_min = np.ones_like(f, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                neighbour = padded[1 + di:1 + di + n_phi, 1 + dj:1 + dj + n_beta]
                is_min &= f <= neighbour
    basins: list[list] = []
    for i, j in zip(*np.nonzero(is_min & (f < threshold))):
        root = _refine(epsilon, phis[i], betas[j])
        if root is None:
            continue
        phi, beta, _ = root
        for b in basins:
            if _circular_distance(b[0], phi) < 1e-6 and abs(b[1] - beta) < 1e-6:
                b[2] += 1
                break
        else:
            basins.append([phi, beta, 1])
    out = []
    for phi, beta, members in sorted(basins):
        res = condition_residuals(StateParams(epsilon, beta, HALF_PI, phi))
        out.append(Basin(phi, beta, math.hypot(res["r13a"], res["r13b"]), members))
    return out
