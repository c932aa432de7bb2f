"""Fixed-size complex linear algebra: Pauli and Dirac matrices, spinor pairs.

Matrices are plain ``numpy`` complex arrays of shape (2, 2) or (4, 4) in the
standard (Dirac) representation::

    gamma^0 = [[I, 0], [0, -I]],   gamma^k = [[0, sigma_k], [-sigma_k, 0]]

Norms are Frobenius for matrices and Euclidean for spinors throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpinorPair",
    "pauli",
    "gamma",
    "identity",
    "apply",
    "matrix_norm",
    "anticommutator",
    "metric",
    "nullspace_test",
    "NULLSPACE_FLOOR",
]

# Absolute guard so that the zero matrix passes the null-space test.
NULLSPACE_FLOOR = 1e-300

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class SpinorPair:
    """Two complex amplitudes (upper pair ``w`` or lower pair ``v`` of a bispinor)."""

    c1: complex
    c2: complex

    def __post_init__(self):
        for name in ("c1", "c2"):
            value = complex(getattr(self, name))
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValueError(f"spinor component {name} is not finite: {value}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_array(cls, arr) -> SpinorPair:
        arr = np.asarray(arr, dtype=complex).reshape(2)
        return cls(arr[0], arr[1])

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2], dtype=complex)

    def norm(self) -> float:
        return math.hypot(abs(self.c1), abs(self.c2))

    def scaled(self, factor: complex) -> SpinorPair:
        return SpinorPair(self.c1 * factor, self.c2 * factor)

    def isclose(self, other: SpinorPair, tol: float = 1e-13) -> bool:
        return abs(self.c1 - other.c1) <= tol and abs(self.c2 - other.c2) <= tol

    def __iter__(self):
        yield self.c1
        yield self.c2


def pauli(axis: str) -> np.ndarray:
    """Return the Pauli matrix for ``axis`` in {"x", "y", "z"}."""
    try:
        return _PAULI[axis].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}; expected x, y or z") from None


def identity(dim: int = 2) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def gamma(index) -> np.ndarray:
    """Dirac matrix gamma^mu, ``index`` in {0, "x", "y", "z"} (1, 2, 3 also accepted)."""
    key = {1: "x", 2: "y", 3: "z", "0": 0, "t": 0}.get(index, index)
    out = np.zeros((4, 4), dtype=complex)
    if key == 0:
        out[:2, :2] = identity(2)
        out[2:, 2:] = -identity(2)
        return out
    sigma = pauli(key)
    out[:2, 2:] = sigma
    out[2:, :2] = -sigma
    return out


def metric() -> np.ndarray:
    """Minkowski metric with signature (+, -, -, -)."""
    return np.diag([1.0, -1.0, -1.0, -1.0])


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def apply(m: np.ndarray, w) -> np.ndarray:
    """Apply a fixed-size matrix to a spinor (``SpinorPair`` or array)."""
    vec = w.as_array() if isinstance(w, SpinorPair) else np.asarray(w, dtype=complex)
    if m.shape[1] != vec.shape[0]:
        raise ValueError(f"shape mismatch: matrix {m.shape} vs vector {vec.shape}")
    return m @ vec


def matrix_norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, "fro"))


def nullspace_test(m: np.ndarray, w, tol: float) -> bool:
    """True iff ``|m w| <= tol * (|m|_F |w| + NULLSPACE_FLOOR)``.

    >>> nullspace_test(np.zeros((2, 2)), SpinorPair(1, 0), 1e-12)
    True
    >>> nullspace_test(identity(2), SpinorPair(1, 0), 1e-12)
    False
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    vec = w.as_array() if isinstance(w, SpinorPair) else np.asarray(w, dtype=complex)
    lhs = float(np.linalg.norm(m @ vec))
    return lhs <= tol * (matrix_norm(m) * float(np.linalg.norm(vec)) + NULLSPACE_FLOOR)

