import cmath
import math

import numpy as np
import pytest

from fqm.errors import DimensionMismatch, EvenModulus, NotPrimePower
from fqm.heisenberg import tau, unitarity_residual
from fqm.metaplectic import (
    align_phase,
    build_U,
    build_U_direct,
    build_U_prime_power,
    delta,
    embedded_factors,
    gauss_sum,
    intertwine_residual,
    oracle_U,
    phase_residual,
    trick_normalize,
)
from fqm.modarith import SL2Element, random_sl2, sino_context, sino_decompose, sl2_elements

CAT = (1, 1, 1, 2)


def direct_gauss(x, n):
    """Independent summation in pure Python."""
    return sum(cmath.exp(2j * math.pi * ((x * r * r) % n) / n) for r in range(n)) / math.sqrt(n)


def test_gauss_sum_examples():
    assert gauss_sum(0, 7) == pytest.approx(math.sqrt(7))
    assert abs(gauss_sum(1, 5) - 1) < 1e-12
    assert abs(gauss_sum(1, 3) - 1j) < 1e-12
    # oracle agrees with the frozen values
    assert abs(direct_gauss(1, 5) - 1) < 1e-12
    assert abs(direct_gauss(1, 3) - 1j) < 1e-12


@pytest.mark.parametrize("n", [9, 15, 25, 27, 45])
def test_gauss_sum_unimodular_on_units(n):
    for x in range(1, n):
        if math.gcd(x, n) == 1:
            assert abs(abs(gauss_sum(x, n)) - 1) < 1e-12
            assert abs(gauss_sum(x, n) - direct_gauss(x, n)) < 1e-10


def test_gauss_sum_factorization_n15():
    ctx = sino_context(15)
    for x in range(15):
        prod = 1
        for xi, c in zip(sino_decompose(x, ctx), ctx.components):
            prod *= gauss_sum(c.m * xi, c.modulus)
        assert abs(gauss_sum(x, 15) - prod) <= 1e-10


def test_delta_examples():
    n = 11
    assert delta(SL2Element.identity(n)) == 0
    assert delta(SL2Element.rotation(n)) == 2
    assert delta(-SL2Element.identity(n)) == 4


def test_trick_examples():
    t = trick_normalize(SL2Element(2, 1, 1, 1, 5), 5)
    assert t.k == 0
    t = trick_normalize(SL2Element.identity(7), 7)
    assert t.k == 1
    assert t.A_reduced == SL2Element(0, -1, 1, 0, 7)
    assert delta(t.A_reduced) == 2
    t = trick_normalize(SL2Element(1, 2, 0, 1, 5), 5)
    assert t.k == 2
    assert t.A_reduced == -SL2Element(1, 2, 0, 1, 5)


@pytest.mark.parametrize("q", [3, 5, 9, 25, 27])
def test_trick_always_terminates(q):
    p = 3 if q % 3 == 0 else 5
    rng = np.random.default_rng(q)
    S = SL2Element.rotation(q)
    for _ in range(200):
        A = random_sl2(q, rng)
        t = trick_normalize(A, q)
        assert t.k <= 2
        assert delta(t.A_reduced) % p != 0
        assert S**t.k @ t.A_reduced == A


def test_identity_maps_to_identity():
    for n in (3, 5, 9, 15):
        U = build_U(SL2Element.identity(n))
        assert phase_residual(np.eye(n), U) <= tau(n)
    # k = 1 path: U(S) U(S^-1)
    assert np.abs(build_U_prime_power(SL2Element.identity(7)) - np.eye(7)).max() <= tau(7)


def test_cat_map_intertwines_n3():
    A = SL2Element(*CAT, 3)
    assert intertwine_residual(build_U_prime_power(A), A) <= tau(3)


def test_unitarity_mod27():
    rng = np.random.default_rng(27)
    for _ in range(50):
        U = build_U_prime_power(random_sl2(27, rng))
        assert unitarity_residual(U) <= tau(27)


def test_prime_power_errors():
    with pytest.raises(NotPrimePower):
        build_U_prime_power(SL2Element(*CAT, 15))
    with pytest.raises(EvenModulus):
        build_U_prime_power(SL2Element(*CAT, 4))


def test_exhaustive_sl2_z3():
    for A in sl2_elements(3):
        U = build_U(A)
        assert unitarity_residual(U) <= tau(3)
        assert intertwine_residual(U, A) <= tau(3)


@pytest.mark.parametrize("n", [5, 9, 15, 21, 45])
def test_intertwining_random(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(10):
        A = random_sl2(n, rng)
        assert intertwine_residual(build_U(A), A) <= tau(n)


def test_embedded_factors_commute_n15():
    rng = np.random.default_rng(15)
    for _ in range(10):
        A = random_sl2(15, rng)
        U1, U2 = embedded_factors(A)
        U = build_U(A)
        assert np.abs(U1 @ U2 - U).max() <= tau(15)
        assert np.abs(U2 @ U1 - U).max() <= tau(15)


def test_build_matches_oracle_cat_n15():
    A = SL2Element(*CAT, 15)
    assert phase_residual(oracle_U(A), build_U(A)) <= tau(15)


def test_direct_formula_cross_check():
    rng = np.random.default_rng(5)
    checked = 0
    for n in (15, 21, 45):
        while True:
            A = random_sl2(n, rng)
            if math.gcd(delta(A), n) == 1:
                break
        assert phase_residual(build_U_direct(A), build_U(A)) <= tau(n)
        checked += 1
    assert checked == 3
    with pytest.raises(ValueError):
        build_U_direct(SL2Element.identity(15))


def test_oracle_identity():
    assert np.abs(oracle_U(SL2Element.identity(9)) - np.eye(9)).max() <= tau(9)


def test_oracle_projective_property_n9():
    rng = np.random.default_rng(9)
    for _ in range(5):
        A, B = random_sl2(9, rng), random_sl2(9, rng)
        c, res = align_phase(oracle_U(A @ B), oracle_U(A) @ oracle_U(B))
        assert abs(abs(c) - 1) <= 1e-9
        assert res <= tau(9)


def test_oracle_satisfies_definition():
    rng = np.random.default_rng(11)
    for n in (5, 15):
        A = random_sl2(n, rng)
        assert intertwine_residual(oracle_U(A), A) <= tau(n)


def test_intertwine_residual_examples():
    I = SL2Element.identity(15)
    assert intertwine_residual(np.eye(15), I) == 0
    rng = np.random.default_rng(1)
    A = SL2Element(*CAT, 15)
    U = build_U(A)
    for _ in range(5):
        B = random_sl2(15, rng)
        if B != A:
            assert intertwine_residual(U, B) > 0.1
    with pytest.raises(DimensionMismatch):
        intertwine_residual(np.eye(5), I)


@pytest.mark.parametrize("n", [3, 5, 9, 15])
def test_representation_cocycle(n):
    rng = np.random.default_rng(200 + n)
    for _ in range(5):
        A, B = random_sl2(n, rng), random_sl2(n, rng)
        c, res = align_phase(build_U(A @ B), build_U(A) @ build_U(B))
        assert abs(abs(c) - 1) <= 1e-9
        assert res <= tau(n)


def test_quantum_recurrence_n5():
    A = SL2Element(*CAT, 5)
    U10 = np.linalg.matrix_power(build_U(A), 10)
    c, res = align_phase(np.eye(5), U10)
    assert abs(abs(c) - 1) <= 1e-9 and res <= tau(5)
