"""
Metaplectic representation U(A) of SL(2, Z_N) for odd N.

``U(A)`` is the unitary satisfying ``U^-1 J_{r,s} U = J_{(r,s)A}``. For a
prime power q it is the Weyl-Fourier sum

    U(A) = sigma(1) sigma(delta) / q * sum_{r,s} w^{[b r^2 + (d-a) r s - c s^2] / 2 delta} J_{r,s}

with delta = 2 - a - d and every division done mod q. When delta is not a
unit we peel off powers of S = [[0, 1], [-1, 0]] first.

For composite N the element is split by CRT. The factor living on N_i is
realised directly on C^N as the same sum over the sub-Heisenberg group
J_{x e_i, y e_i} (e_i = m_i n_i), whose commutator is w_{N_i}^{n_i(...)}, so
the formula is evaluated with the conjugate root w_{N_i}^{n_i}. The factors
for different i commute and their product is U(A).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSolutionSpace, DimensionMismatch, SizeLimit
from .heisenberg import (
    DENSE_LIMIT,
    half,
    roots_of_unity,
    weyl_element,
    weyl_monomial,
)
from .modarith import (
    SinoComponent,
    SinoContext,
    SL2Element,
    check_odd_modulus,
    crt_split_sl2,
    mod_inverse,
    prime_power_base,
    sino_context,
)


def gauss_sum(x: int, n: int) -> complex:
    """sigma(x) = n^-1/2 sum_r w^{x r^2}, by direct summation."""
    n = check_odd_modulus(n)
    r = np.arange(n, dtype=np.int64)
    exps = ((x % n) * ((r * r) % n)) % n
    return complex(roots_of_unity(n)[exps].sum() / math.sqrt(n))


def gauss_sum_closed_form(n: int) -> complex:
    """Classical value of sigma(1) for odd n: 1 if n = 1 mod 4, i if n = 3 mod 4."""
    return 1.0 + 0j if n % 4 == 1 else 1j


def delta(A: SL2Element) -> int:
    return (2 - A.a - A.d) % A.modulus


@dataclass(frozen=True)
class TrickNormalization:
    """A = S^k A_reduced with delta(A_reduced) a unit mod the prime power."""

    k: int
    A_reduced: SL2Element


def trick_normalize(A: SL2Element, q: int) -> TrickNormalization:
    p, _ = prime_power_base(q)
    A = A.reduce(q) if A.modulus != q else A
    S_inv = SL2Element.rotation(q).inverse()
    current = A
    for k in range(4):
        if delta(current) % p:
            return TrickNormalization(k, current)
        current = S_inv @ current
    # delta(A) + delta(-A) = 4, so one of k = 0, 2 always works for odd p
    raise AssertionError(f"no invertible delta found for {A}")


def _weyl_fourier(A_i: SL2Element, comp: SinoComponent, n: int) -> np.ndarray:
    """Weyl-Fourier sum for A_i mod N_i, realised on C^n through the CRT embedding.

    With a single component (m = n_i = 1) this is the plain prime-power formula.
    """
    q = comp.modulus
    a, b, c, d = A_i.entries
    dl = (2 - a - d) % q
    inv = mod_inverse((2 * dl) % q, q)
    e = comp.idempotent % n
    roots = roots_of_unity(n)

    y = np.arange(q, dtype=np.int64)
    s = (y * e) % n
    j = np.arange(n, dtype=np.int64)
    # J exponent s*j for every (y, j), reduced once
    sj = (s[:, None] * j[None, :]) % n

    U = np.zeros((n, n), dtype=complex)
    for x in range(q):
        phi = ((b * x * x) % q + ((d - a) * x % q) * y - (c * y * y) % q) % q
        phi = (phi * inv) % q
        coeff_exp = (comp.m * ((comp.n * phi) % q)) % n
        r = (x * e) % n
        exps = (coeff_exp + (r * s % n) * half(n))[:, None] + sj
        vals = roots[exps % n].sum(axis=0)
        U[(j + r) % n, j] = vals

    pref = gauss_sum(comp.n, q) * gauss_sum(comp.n * dl, q) / q
    return pref * U


def _factor_operator(A_i: SL2Element, comp: SinoComponent, n: int) -> np.ndarray:
    trick = trick_normalize(A_i, comp.modulus)
    U = _weyl_fourier(trick.A_reduced, comp, n)
    if trick.k:
        U_S = _weyl_fourier(SL2Element.rotation(comp.modulus), comp, n)
        for _ in range(trick.k):
            U = U_S @ U
    return U


def _check_dense(n: int):
    if n > DENSE_LIMIT:
        raise SizeLimit(f"dense maps are limited to N <= {DENSE_LIMIT}, got {n}")


def build_U_prime_power(A: SL2Element) -> np.ndarray:
    """U(A) for A mod an odd prime power, via the Weyl-Fourier form."""
    q = check_odd_modulus(A.modulus)
    p, e = prime_power_base(q)
    _check_dense(q)
    return _factor_operator(A, SinoComponent(q, 1, 1, p, e), q)


def embedded_factors(A: SL2Element, ctx: SinoContext | None = None) -> list[np.ndarray]:
    """The commuting N x N operators U(A_i hat), one per CRT component."""
    ctx = ctx or sino_context(A.modulus)
    n = ctx.modulus
    _check_dense(n)
    return [
        _factor_operator(A_i, comp, n)
        for A_i, comp in zip(crt_split_sl2(A, ctx), ctx.components)
    ]


def build_U(A: SL2Element, ctx: SinoContext | None = None) -> np.ndarray:
    """Dense U(A) for any odd modulus, as the product of its embedded CRT factors."""
    factors = embedded_factors(A, ctx)
    U = factors[0]
    for F in factors[1:]:
        U = U @ F
    return U


def build_U_direct(A: SL2Element) -> np.ndarray:
    """Weyl-Fourier sum taken directly mod N.

    Only defined when delta(A) is a unit mod N; kept as a cross-check on the
    CRT route.
    """
    n = check_odd_modulus(A.modulus)
    _check_dense(n)
    if math.gcd(delta(A), n) != 1:
        raise ValueError(f"delta = {delta(A)} is not a unit mod {n}")
    return _weyl_fourier(A, SinoComponent(n, 1, 1, 0, 0), n)


def oracle_U(A: SL2Element) -> np.ndarray:
    """Solve the intertwining equations for U directly.

    Finds the null space of ``J_{1,0} M = M J_{(1,0)A}``, ``J_{0,1} M = M J_{(0,1)A}``
    as an N^2-dimensional linear system. Irreducibility makes the solution
    unique up to scale; the result is scaled to be unitary and phased so the
    first nonzero entry (row-major) is real positive.
    """
    n = check_odd_modulus(A.modulus)
    if n > 45:
        raise SizeLimit(f"oracle is limited to N <= 45, got {n}")
    eye = np.eye(n)
    blocks = []
    for r, s in ((1, 0), (0, 1)):
        X = weyl_element(r, s, n)
        Y = weyl_element(*A.act(r, s), n)
        # column-major vec: vec(X M) = (I kron X) vec M, vec(M Y) = (Y^T kron I) vec M
        blocks.append(np.kron(eye, X) - np.kron(Y.T, eye))
    K = np.vstack(blocks)
    evals, evecs = np.linalg.eigh(K.conj().T @ K)
    null_dim = int(np.sum(evals < 1e-8))
    if null_dim != 1:
        raise DegenerateSolutionSpace(f"null space has dimension {null_dim}")
    M = evecs[:, 0].reshape((n, n), order="F")
    M = M * (math.sqrt(n) / np.linalg.norm(M))
    flat = M.ravel()
    first = flat[np.argmax(np.abs(flat) > 1e-9 * np.abs(flat).max())]
    return M * (abs(first) / first)


def intertwine_residual(U: np.ndarray, A: SL2Element, pairs=None) -> float:
    """max over (r, s) of ||U^-1 J_{r,s} U - J_{(r,s)A}||_inf (max-abs entry).

    ``pairs`` restricts the maximum to a subset of indices; default is all of Z_N^2.
    """
    n = A.modulus
    if U.shape != (n, n):
        raise DimensionMismatch(f"map has shape {U.shape}, element is mod {n}")
    U = np.asarray(U, dtype=complex)
    Ud = U.conj().T
    if pairs is None:
        pairs = ((r, s) for r in range(n) for s in range(n))
    worst = 0.0
    JU = np.empty_like(U)
    for r, s in pairs:
        rows, vals = weyl_monomial(r, s, n)
        JU[rows] = vals[:, None] * U
        lhs = Ud @ JU
        r2, s2 = A.act(r, s)
        rows2, vals2 = weyl_monomial(r2, s2, n)
        lhs[rows2, np.arange(n)] -= vals2
        worst = max(worst, float(np.abs(lhs).max()))
    return worst


def align_phase(X: np.ndarray, Y: np.ndarray) -> tuple[complex, float]:
    """Best global phase relating two maps.

    Picks the largest-modulus entry of X, reads the ratio c = Y/X there and
    returns ``(c, max|c_unit * X - Y|)`` where c_unit = c/|c|. The raw ratio is
    returned so callers can check that it is unimodular.
    """
    X = np.asarray(X)
    Y = np.asarray(Y)
    if X.shape != Y.shape:
        raise DimensionMismatch(f"{X.shape} vs {Y.shape}")
    idx = np.unravel_index(np.argmax(np.abs(X)), X.shape)
    c = complex(Y[idx] / X[idx])
    unit = c / abs(c) if c != 0 else 1.0
    return c, float(np.abs(unit * X - Y).max())


def phase_residual(X: np.ndarray, Y: np.ndarray) -> float:
    return align_phase(X, Y)[1]


def cocycle(A: SL2Element, B: SL2Element) -> tuple[complex, float]:
    """Measure c in U(A) U(B) = c U(AB); returns (c, residual after alignment)."""
    return align_phase(build_U(A @ B), build_U(A) @ build_U(B))
