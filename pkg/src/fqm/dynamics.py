"""Classical SL(2, Z_N) dynamics on the discrete torus Z_N x Z_N."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import OutOfRange
from .modarith import SL2Element


@dataclass(frozen=True)
class TorusPoint:
    q: int
    p: int
    modulus: int

    def __post_init__(self):
        if not (0 <= self.q < self.modulus and 0 <= self.p < self.modulus):
            raise OutOfRange(f"({self.q}, {self.p}) outside Z_{self.modulus}^2")

    def step(self, A: SL2Element) -> "TorusPoint":
        return TorusPoint(*A.act(self.q, self.p), self.modulus)

    def as_tuple(self) -> tuple[int, int]:
        return (self.q, self.p)


def order_mod(A: SL2Element) -> int:
    """Smallest t >= 1 with A^t = I mod N, by repeated multiplication."""
    n = A.modulus
    identity = SL2Element.identity(n)
    bound = n**3
    power, t = A, 1
    while power != identity:
        power = power @ A
        t += 1
        assert t <= bound, f"order of {A} exceeds |SL(2, Z_{n})| bound"
    return t


def orbit(x: TorusPoint, A: SL2Element) -> list[TorusPoint]:
    """Trajectory of x under (q, p) -> (q, p) A until it first returns to x."""
    if x.modulus != A.modulus:
        raise OutOfRange("point and map have different moduli")
    points = [x]
    y = x.step(A)
    while y != x:
        points.append(y)
        y = y.step(A)
    return points


def orbit_partition(A: SL2Element) -> list[list[tuple[int, int]]]:
    """All orbits of the torus under A, each listed from its smallest point."""
    n = A.modulus
    seen = bytearray(n * n)
    orbits = []
    for q in range(n):
        for p in range(n):
            if seen[q * n + p]:
                continue
            pts = orbit(TorusPoint(q, p, n), A)
            for pt in pts:
                seen[pt.q * n + pt.p] = 1
            orbits.append([pt.as_tuple() for pt in pts])
    return orbits


def period_report(A: SL2Element, point: tuple[int, int] | None = None) -> dict:
    """Period of A together with orbit-length statistics over the torus."""
    n = A.modulus
    lengths: dict[int, int] = {}
    for orb in orbit_partition(A):
        lengths[len(orb)] = lengths.get(len(orb), 0) + 1
    report = {
        "n": n,
        "sl2": {"a": A.a, "b": A.b, "c": A.c, "d": A.d},
        "period": order_mod(A),
        "orbit_lengths": {str(k): lengths[k] for k in sorted(lengths)},
        "orbit_count": sum(lengths.values()),
    }
    if point is not None:
        pts = orbit(TorusPoint(point[0], point[1], n), A)
        report["point"] = list(point)
        report["orbit"] = [list(pt.as_tuple()) for pt in pts]
        report["orbit_length"] = len(pts)
    return report
