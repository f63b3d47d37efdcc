"""
Exact modular arithmetic over Z_N for odd N.

Everything here works on Python integers, so intermediate products never
overflow. Residues are always kept in the canonical range [0, N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import EvenModulus, InvalidDeterminant, NonInvertible, NotPrimePower, OutOfRange


def check_odd_modulus(n: int) -> int:
    n = int(n)
    if n % 2 == 0:
        raise EvenModulus(f"modulus must be odd, got {n}")
    if n < 3:
        raise OutOfRange(f"modulus must be >= 3, got {n}")
    return n


def mod_inverse(a: int, m: int) -> int:
    """Return x in [0, m) with a*x = 1 (mod m)."""
    if m < 2:
        raise OutOfRange(f"modulus must be >= 2, got {m}")
    if math.gcd(a, m) != 1:
        raise NonInvertible(f"{a} is not invertible mod {m}")
    return pow(a, -1, m)


def factor_odd(n: int) -> list[tuple[int, int]]:
    """Prime-power factorization of an odd modulus by trial division.

    Returns ``[(p, e), ...]`` with strictly increasing primes.
    """
    n = check_odd_modulus(n)
    factors = []
    p = 3
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors.append((p, e))
        p += 2
    if n > 1:
        factors.append((n, 1))
    return factors


def prime_power_base(q: int) -> tuple[int, int]:
    """Return (p, e) if q = p**e for an odd prime p, else raise NotPrimePower."""
    fac = factor_odd(q)
    if len(fac) != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    return fac[0]


@dataclass(frozen=True)
class SinoComponent:
    modulus: int  # N_i = p_i**e_i
    m: int  # N / N_i
    n: int  # m^-1 mod N_i
    prime: int
    exponent: int

    @property
    def idempotent(self) -> int:
        """m*n, the CRT basis element; reduce mod N before use."""
        return self.m * self.n


@dataclass(frozen=True)
class SinoContext:
    """An odd modulus together with its CRT data."""

    modulus: int
    components: tuple[SinoComponent, ...]

    @property
    def factors(self) -> list[int]:
        return [c.modulus for c in self.components]

    def __len__(self) -> int:
        return len(self.components)


def sino_context(n: int) -> SinoContext:
    n = check_odd_modulus(n)
    comps = []
    for p, e in factor_odd(n):
        q = p**e
        m = n // q
        comps.append(SinoComponent(q, m, mod_inverse(m % q, q), p, e))
    return SinoContext(n, tuple(comps))


def sino_decompose(r: int, ctx: SinoContext) -> tuple[int, ...]:
    if not 0 <= r < ctx.modulus:
        raise OutOfRange(f"residue {r} outside [0, {ctx.modulus})")
    return tuple(r % c.modulus for c in ctx.components)


def sino_recompose(parts: Sequence[int], ctx: SinoContext) -> int:
    if len(parts) != len(ctx.components):
        raise OutOfRange(f"expected {len(ctx.components)} parts, got {len(parts)}")
    total = 0
    for r_i, c in zip(parts, ctx.components):
        if not 0 <= r_i < c.modulus:
            raise OutOfRange(f"component {r_i} outside [0, {c.modulus})")
        total += r_i * c.m * c.n
    return total % ctx.modulus


@dataclass(frozen=True)
class SL2Element:
    """A 2x2 integer matrix [[a, b], [c, d]] mod N with determinant 1.

    Entries are reduced into [0, N) on construction and the determinant is
    checked eagerly. ``A @ B`` is the matrix product mod N.
    """

    a: int
    b: int
    c: int
    d: int
    modulus: int

    def __post_init__(self):
        n = self.modulus
        if n < 2:
            raise OutOfRange(f"modulus must be >= 2, got {n}")
        for name in "abcd":
            object.__setattr__(self, name, int(getattr(self, name)) % n)
        if (self.a * self.d - self.b * self.c) % n != 1 % n:
            raise InvalidDeterminant(
                f"determinant must be 1 mod N (got {(self.a * self.d - self.b * self.c) % n} mod {n})"
            )

    @classmethod
    def identity(cls, n: int) -> "SL2Element":
        return cls(1, 0, 0, 1, n)

    @classmethod
    def rotation(cls, n: int) -> "SL2Element":
        """S = [[0, 1], [-1, 0]]."""
        return cls(0, 1, -1, 0, n)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other: "SL2Element") -> "SL2Element":
        if self.modulus != other.modulus:
            raise OutOfRange("moduli differ")
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return SL2Element(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, self.modulus)

    def inverse(self) -> "SL2Element":
        return SL2Element(self.d, -self.b, -self.c, self.a, self.modulus)

    def __neg__(self) -> "SL2Element":
        return SL2Element(-self.a, -self.b, -self.c, -self.d, self.modulus)

    def __pow__(self, k: int) -> "SL2Element":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = SL2Element.identity(self.modulus), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def reduce(self, q: int) -> "SL2Element":
        """Entrywise reduction to a divisor q of the modulus."""
        if self.modulus % q:
            raise OutOfRange(f"{q} does not divide {self.modulus}")
        return SL2Element(self.a, self.b, self.c, self.d, q)

    def act(self, r: int, s: int) -> tuple[int, int]:
        """Row-vector right action (r, s) -> (r, s) A."""
        n = self.modulus
        return ((r * self.a + s * self.c) % n, (r * self.b + s * self.d) % n)

    def trace(self) -> int:
        return (self.a + self.d) % self.modulus


def crt_split_sl2(A: SL2Element, ctx: SinoContext) -> list[SL2Element]:
    if A.modulus != ctx.modulus:
        raise OutOfRange(f"element is mod {A.modulus}, context is mod {ctx.modulus}")
    return [A.reduce(c.modulus) for c in ctx.components]


def crt_join_sl2(parts: Sequence[SL2Element], ctx: SinoContext) -> SL2Element:
    if len(parts) != len(ctx.components):
        raise OutOfRange(f"expected {len(ctx.components)} parts, got {len(parts)}")
    for A_i, c in zip(parts, ctx.components):
        if A_i.modulus != c.modulus:
            raise OutOfRange(f"part is mod {A_i.modulus}, expected mod {c.modulus}")
    entries = [sino_recompose([getattr(A_i, name) for A_i in parts], ctx) for name in "abcd"]
    return SL2Element(*entries, ctx.modulus)


def embed_factor(A_i: SL2Element, i: int, ctx: SinoContext) -> SL2Element:
    """The element of SL(2, Z_N) equal to A_i mod N_i and to I mod every other N_j."""
    parts = [SL2Element.identity(c.modulus) for c in ctx.components]
    parts[i] = A_i
    return crt_join_sl2(parts, ctx)


def is_in_O2(A: SL2Element) -> bool:
    n = A.modulus
    return A.d == A.a and A.c == (-A.b) % n and (A.a * A.a + A.b * A.b) % n == 1 % n


def sl2_elements(n: int) -> Iterable[SL2Element]:
    """Enumerate SL(2, Z_n). Cost is n**4; meant for small n."""
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    if (a * d - b * c) % n == 1 % n:
                        yield SL2Element(a, b, c, d, n)


def random_sl2(n: int, rng) -> SL2Element:
    """Uniform sample from SL(2, Z_n) by rejection, driven by a numpy Generator."""
    while True:
        a, b, c, d = (int(x) for x in rng.integers(0, n, size=4))
        if (a * d - b * c) % n == 1 % n:
            return SL2Element(a, b, c, d, n)
