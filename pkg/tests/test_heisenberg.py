import cmath
import itertools

import numpy as np
import pytest

from fqm.heisenberg import (
    ToleranceConfig,
    WeylIndex,
    clock_shift,
    fourier_basis,
    fourier_eigenvalues,
    unitarity_residual,
    weyl_element,
    weyl_phase,
)
from fqm.errors import OutOfRange
from fqm.modarith import sino_context, sino_decompose


def omega(n):
    return cmath.exp(2j * cmath.pi / n)


def test_clock_shift_n3():
    Q, P = clock_shift(3)
    w = omega(3)
    assert np.allclose(Q, np.diag([1, w, w * w]), atol=1e-15)
    expected = np.zeros((3, 3))
    for i, j in [(2, 1), (3, 2), (1, 3)]:  # 1-based positions of the ones
        expected[i - 1, j - 1] = 1
    assert np.array_equal(P, expected)
    assert np.allclose(np.linalg.matrix_power(P, 3), np.eye(3))


@pytest.mark.parametrize("n", [3, 5, 9, 15, 21])
def test_weyl_relation(n):
    Q, P = clock_shift(n)
    assert np.abs(Q @ P - omega(n) * P @ Q).max() <= 1e-12
    assert np.allclose(np.linalg.matrix_power(P, n), np.eye(n))
    assert np.allclose(np.linalg.matrix_power(Q, n), np.eye(n))
    assert unitarity_residual(Q) < 1e-14 and unitarity_residual(P) == 0


def test_weyl_element_generators():
    n = 7
    Q, P = clock_shift(n)
    assert np.allclose(weyl_element(1, 0, n), P)
    assert np.allclose(weyl_element(0, 1, n), Q)
    assert np.allclose(weyl_element(0, 0, n), np.eye(n))


def test_weyl_element_n3_half_phase():
    Q, P = clock_shift(3)
    # inv2 mod 3 = 2, so J_{1,1} = w^2 P Q
    assert np.allclose(weyl_element(1, 1, 3), omega(3) ** 2 * P @ Q)


def test_weyl_element_structure():
    n = 9
    for r, s in itertools.product(range(n), repeat=2):
        J = weyl_element(r, s, n)
        nz = np.abs(J) > 1e-12
        assert (nz.sum(axis=1) == 1).all()
        assert np.allclose(np.abs(J[nz]), 1)
        assert unitarity_residual(J) < 1e-13


def test_composition_law_exhaustive_n9():
    n = 9
    Js = {(r, s): weyl_element(r, s, n) for r, s in itertools.product(range(n), repeat=2)}
    worst = 0.0
    for (r, s), (r2, s2) in itertools.product(Js, repeat=2):
        lhs = Js[r, s] @ Js[r2, s2]
        rhs = weyl_phase(r, s, r2, s2, n) * Js[(r + r2) % n, (s + s2) % n]
        worst = max(worst, np.abs(lhs - rhs).max())
        comm = Js[r2, s2] @ Js[r, s] * omega(n) ** ((r2 * s - s2 * r) % n)
        worst = max(worst, np.abs(lhs - comm).max())
    assert worst <= 1e-10


def test_commutation_random_n45():
    n = 45
    rng = np.random.default_rng(3)
    for _ in range(100):
        r, s, r2, s2 = (int(x) for x in rng.integers(0, n, 4))
        A, B = weyl_element(r, s, n), weyl_element(r2, s2, n)
        assert np.abs(A @ B - omega(n) ** ((r2 * s - s2 * r) % n) * B @ A).max() <= 1e-10


def test_heisenberg_crt_factorization_n15():
    n = 15
    ctx = sino_context(n)
    e1, e2 = (c.idempotent % n for c in ctx.components)
    for r, s in itertools.product(range(n), repeat=2):
        (r1, r2), (s1, s2) = sino_decompose(r, ctx), sino_decompose(s, ctx)
        J1 = weyl_element(r1 * e1 % n, s1 * e1 % n, n)
        J2 = weyl_element(r2 * e2 % n, s2 * e2 % n, n)
        assert np.abs(J1 @ J2 - weyl_element(r, s, n)).max() <= 1e-12
        assert np.abs(J1 @ J2 - J2 @ J1).max() <= 1e-12


def test_fourier_basis_uniform_column_and_orthonormal():
    for n in (3, 15):
        F = fourier_basis(n)
        assert np.allclose(F[:, -1], np.ones(n) / np.sqrt(n))
        assert np.abs(F.conj().T @ F - np.eye(n)).max() <= 1e-12


@pytest.mark.parametrize("n", [3, 15])
def test_fourier_basis_diagonalises_shift(n):
    _, P = clock_shift(n)
    F = fourier_basis(n)
    lam = fourier_eigenvalues(n)
    assert np.abs(P @ F - F * lam[None, :]).max() <= 1e-12
    # eigenvalue on e_k is w^{-k}
    k = np.arange(1, n + 1)
    assert np.allclose(lam, omega(n) ** (-k))


def test_weyl_index_range():
    WeylIndex(0, 4, 5)
    with pytest.raises(OutOfRange):
        WeylIndex(5, 0, 5)


def test_tolerance_config(monkeypatch):
    tol = ToleranceConfig()
    assert tol.tau(15) == pytest.approx(1.5e-8)
    with pytest.raises(ValueError):
        ToleranceConfig(entry_tol=0)
    monkeypatch.setenv("FQM_TOLERANCE_SCALE", "1e-6")
    assert ToleranceConfig.from_env().tau(10) == pytest.approx(1e-5)
