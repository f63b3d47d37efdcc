"""
Discrete Heisenberg-Weyl group on C^N.

Matrices use 0-based indices: Q = diag(w^j), P e_j = e_{j+1 mod N}, with
w = exp(2 pi i / N). All phases are evaluated as powers of w whose exponent
has first been reduced mod N in integer arithmetic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange
from .modarith import check_odd_modulus

DENSE_LIMIT = 4096


@dataclass(frozen=True)
class ToleranceConfig:
    entry_tol: float = 1e-9
    matrix_tol_scale: float = 1e-9

    def __post_init__(self):
        if self.entry_tol <= 0 or self.matrix_tol_scale <= 0:
            raise ValueError("tolerances must be positive")

    def tau(self, n: int) -> float:
        """Matrix tolerance, linear in the dimension."""
        return self.matrix_tol_scale * n

    @classmethod
    def from_env(cls) -> "ToleranceConfig":
        scale = os.environ.get("FQM_TOLERANCE_SCALE")
        if scale is None:
            return cls()
        return cls(matrix_tol_scale=float(scale))


DEFAULT_TOLERANCE = ToleranceConfig()


def tau(n: int) -> float:
    return DEFAULT_TOLERANCE.tau(n)


@dataclass(frozen=True)
class WeylIndex:
    r: int
    s: int
    modulus: int

    def __post_init__(self):
        if not (0 <= self.r < self.modulus and 0 <= self.s < self.modulus):
            raise OutOfRange(f"({self.r}, {self.s}) outside Z_{self.modulus}^2")


def roots_of_unity(n: int) -> np.ndarray:
    """Table of w**k for k in range(n); index it with exponents already reduced mod n."""
    return np.exp(2j * np.pi * np.arange(n) / n)


def half(n: int) -> int:
    """The inverse of 2 mod an odd n."""
    return (n + 1) // 2


def clock_shift(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Return (Q, P) for dimension n."""
    n = check_odd_modulus(n)
    Q = np.diag(roots_of_unity(n))
    P = np.zeros((n, n), dtype=complex)
    P[(np.arange(n) + 1) % n, np.arange(n)] = 1.0
    return Q, P


def weyl_monomial(r: int, s: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Sparse form of J_{r,s}: row index and value for each column j.

    J_{r,s} = w^{rs/2} P^r Q^s has its only nonzero entry of column j at row
    (j + r) mod n, with value w^{rs/2 + s j}.
    """
    r %= n
    s %= n
    j = np.arange(n)
    exps = (r * s * half(n) + s * j) % n
    return (j + r) % n, roots_of_unity(n)[exps]


def weyl_element(r: int, s: int, n: int) -> np.ndarray:
    """Dense J_{r,s} = w^{rs/2} P^r Q^s, with 1/2 taken as the inverse of 2 mod n."""
    n = check_odd_modulus(n)
    rows, vals = weyl_monomial(r, s, n)
    J = np.zeros((n, n), dtype=complex)
    J[rows, np.arange(n)] = vals
    return J


def weyl_phase(r: int, s: int, r2: int, s2: int, n: int) -> complex:
    """The cocycle in J_{r,s} J_{r',s'} = w^{(r's - s'r)/2} J_{r+r', s+s'}."""
    return roots_of_unity(n)[((r2 * s - s2 * r) * half(n)) % n]


def fourier_basis(n: int) -> np.ndarray:
    """Eigenvectors of P as columns.

    Column k-1 holds e_k with entries w^{k(l-1)} / sqrt(n), l = 1..n (so the
    last column is the uniform vector). With P e_j = e_{j+1}, the eigenvalue
    on e_k is w^{-k}; see :func:`fourier_eigenvalues`.
    """
    n = check_odd_modulus(n)
    k = np.arange(1, n + 1)
    l = np.arange(n)
    return roots_of_unity(n)[np.outer(l, k) % n] / np.sqrt(n)


def fourier_eigenvalues(n: int) -> np.ndarray:
    """Eigenvalue of P on each column of :func:`fourier_basis`."""
    k = np.arange(1, n + 1)
    return roots_of_unity(n)[(-k) % n]


def max_abs(M) -> float:
    return float(np.max(np.abs(M))) if np.size(M) else 0.0


def unitarity_residual(M: np.ndarray) -> float:
    return max_abs(M @ M.conj().T - np.eye(M.shape[0]))
