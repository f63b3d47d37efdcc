import numpy as np
import pytest

from fqm.dynamics import TorusPoint, orbit, orbit_partition, order_mod, period_report
from fqm.errors import OutOfRange
from fqm.modarith import SL2Element, random_sl2

CAT = (1, 1, 1, 2)


def brute_order(A):
    """Independent oracle: power the integer matrix with numpy."""
    n = A.modulus
    M = np.array([[A.a, A.b], [A.c, A.d]], dtype=object)
    P = M.copy()
    t = 1
    while not (P % n == np.eye(2, dtype=object)).all():
        P = P.dot(M) % n
        t += 1
    return t


def test_order_examples():
    assert order_mod(SL2Element.identity(7)) == 1
    A = SL2Element(*CAT, 5)
    assert order_mod(A) == 10
    assert A**5 == SL2Element(4, 0, 0, 4, 5)
    assert order_mod(-SL2Element.identity(9)) == 2


@pytest.mark.parametrize("n", [9, 15, 21, 45])
def test_order_against_oracle(n):
    rng = np.random.default_rng(n)
    for _ in range(10):
        A = random_sl2(n, rng)
        t = order_mod(A)
        assert t == brute_order(A)
        assert A**t == SL2Element.identity(n)


def test_orbit_examples():
    A = SL2Element(*CAT, 5)
    assert orbit(TorusPoint(0, 0, 5), A) == [TorusPoint(0, 0, 5)]
    pts = orbit(TorusPoint(1, 0, 5), A)
    assert 10 % len(pts) == 0
    assert len(set(pts)) == len(pts)


@pytest.mark.parametrize("n", [5, 15, 21])
def test_orbit_partition(n):
    rng = np.random.default_rng(n)
    A = random_sl2(n, rng)
    orbits = orbit_partition(A)
    assert sum(len(o) for o in orbits) == n * n
    assert len({p for o in orbits for p in o}) == n * n
    t = order_mod(A)
    assert all(t % len(o) == 0 for o in orbits)


def test_period_report():
    rep = period_report(SL2Element(*CAT, 5), (1, 0))
    assert rep["period"] == 10
    assert rep["orbit_length"] == len(rep["orbit"])
    assert sum(int(k) * v for k, v in rep["orbit_lengths"].items()) == 25


def test_torus_point_range():
    with pytest.raises(OutOfRange):
        TorusPoint(5, 0, 5)
