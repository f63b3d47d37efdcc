"""
CRT permutation R and the factored fast path U(A) = R^T (U_1 kron ... kron U_k) R.

R sends the global index j to the mixed-radix position of a tuple of CRT
residues of j (first factor most significant). Two tuple conventions are
candidates:

    "plain"   j_i = j mod N_i
    "scaled"  j_i = n_i j mod N_i

``build_R`` picks the first one for which R P R^T = P_1 kron ... kron P_k,
checked exactly on the index arrays. That is always "plain". No permutation
can also send Q to Q_1 kron ... kron Q_k: conjugation preserves QP = w PQ,
while the tensor product of the small clock/shift pairs commutes up to
w_{N_1} w_{N_2} ... != w_N. Under the plain convention one gets instead

    R Q R^T       = Q_1^{n_1} kron ... kron Q_k^{n_k}
    R J_{r,s} R^T = J_{r_1, n_1 s_1} kron ... kron J_{r_k, n_k s_k}

so the block for factor i is U_i(D_i^-1 A_i D_i) with D_i = diag(1, n_i),
i.e. [[a, n_i b], [n_i^-1 c, d]] mod N_i.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SizeLimit
from .heisenberg import DENSE_LIMIT, clock_shift
from .metaplectic import build_U_prime_power
from .modarith import SinoContext, SL2Element, check_odd_modulus, crt_split_sl2, mod_inverse, sino_context

CONVENTIONS = ("plain", "scaled")


@dataclass(frozen=True)
class PermutationMap:
    """R as index arrays: R e_j = e_{forward[j]}, and inverse = forward^-1."""

    n: int
    forward: np.ndarray
    inverse: np.ndarray
    convention: str = "plain"

    def matrix(self) -> np.ndarray:
        R = np.zeros((self.n, self.n))
        R[self.forward, np.arange(self.n)] = 1.0
        return R

    def apply(self, v: np.ndarray) -> np.ndarray:
        """R v."""
        return v[self.inverse]

    def apply_transpose(self, w: np.ndarray) -> np.ndarray:
        """R^T w."""
        return w[self.forward]


def _residue_tuples(ctx: SinoContext, convention: str) -> np.ndarray:
    j = np.arange(ctx.modulus, dtype=np.int64)
    if convention == "plain":
        cols = [j % c.modulus for c in ctx.components]
    elif convention == "scaled":
        cols = [(c.n * j) % c.modulus for c in ctx.components]
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return np.stack(cols, axis=1)


def _positions(tuples: np.ndarray, dims: list[int]) -> np.ndarray:
    return np.ravel_multi_index(tuple(tuples.T), dims)


def _shift_conjugates_to_tensor(ctx: SinoContext, forward: np.ndarray) -> bool:
    """Exact check of R P R^T == P_1 kron ... kron P_k on index arrays.

    R P R^T maps position forward[j] to forward[j+1]; the tensor shift maps
    the tuple t to t + (1, ..., 1).
    """
    dims = ctx.factors
    n = ctx.modulus
    tuples = np.stack(np.unravel_index(forward, dims), axis=1)
    shifted = _positions((tuples + 1) % np.array(dims), dims)
    return bool(np.array_equal(shifted, forward[(np.arange(n) + 1) % n]))


def build_R(ctx: SinoContext) -> PermutationMap:
    dims = ctx.factors
    for convention in CONVENTIONS:
        forward = _positions(_residue_tuples(ctx, convention), dims)
        if _shift_conjugates_to_tensor(ctx, forward):
            inverse = np.empty_like(forward)
            inverse[forward] = np.arange(ctx.modulus)
            return PermutationMap(ctx.modulus, forward, inverse, convention)
    raise AssertionError("no CRT convention conjugates P to a tensor product")


def block_element(A: SL2Element, ctx: SinoContext, convention: str = "plain") -> list[SL2Element]:
    """Per-factor elements whose metaplectic maps form the tensor blocks of U(A)."""
    out = []
    for A_i, comp in zip(crt_split_sl2(A, ctx), ctx.components):
        q, n_i = comp.modulus, comp.n
        n_inv = mod_inverse(n_i, q)
        a, b, c, d = A_i.entries
        if convention == "plain":
            out.append(SL2Element(a, n_i * b, n_inv * c, d, q))
        else:
            out.append(SL2Element(a, n_inv * b, n_i * c, d, q))
    return out


def block_weyl_index(r: int, s: int, ctx: SinoContext, convention: str = "plain") -> list[tuple[int, int]]:
    """Tensor-factor Weyl indices with R J_{r,s} R^T = kron_i J_{idx_i}."""
    out = []
    for comp in ctx.components:
        q, n_i = comp.modulus, comp.n
        if convention == "plain":
            out.append((r % q, (n_i * s) % q))
        else:
            out.append(((n_i * r) % q, s % q))
    return out


def clock_block_powers(ctx: SinoContext, convention: str = "plain") -> list[int]:
    """Exponents t_i with R Q R^T = kron_i Q_i^{t_i}."""
    return [c.n if convention == "plain" else 1 for c in ctx.components]


def tensor_compose(blocks: list[np.ndarray]) -> np.ndarray:
    dim = int(np.prod([B.shape[0] for B in blocks]))
    if dim > DENSE_LIMIT:
        raise SizeLimit(f"tensor product of dimension {dim} exceeds {DENSE_LIMIT}")
    out = np.ones((1, 1), dtype=complex)
    for B in blocks:
        out = np.kron(out, B)
    return out


@dataclass
class OpCounter:
    """Tally of multiply-adds executed by :func:`apply_factored`."""

    madds: int = 0


@dataclass(frozen=True)
class FactoredMap:
    ctx: SinoContext
    perm: PermutationMap
    blocks: tuple[np.ndarray, ...]
    element: SL2Element | None = None

    @property
    def n(self) -> int:
        return self.ctx.modulus

    @property
    def madd_count(self) -> int:
        """N * sum N_i, the cost of one application."""
        return self.n * sum(self.ctx.factors)

    def to_dense(self) -> np.ndarray:
        K = tensor_compose(list(self.blocks))
        f = self.perm.forward
        return K[np.ix_(f, f)]

    def apply(self, v: np.ndarray, counter: OpCounter | None = None) -> np.ndarray:
        return apply_factored(self, v, counter)


def factor_map(A: SL2Element, ctx: SinoContext | None = None) -> FactoredMap:
    ctx = ctx or sino_context(A.modulus)
    perm = build_R(ctx)
    blocks = tuple(build_U_prime_power(B) for B in block_element(A, ctx, perm.convention))
    return FactoredMap(ctx, perm, blocks, A)


def apply_factored(fm: FactoredMap, v: np.ndarray, counter: OpCounter | None = None) -> np.ndarray:
    """R^T (U_1 kron ... kron U_k) R v, one axis contraction per factor."""
    v = np.asarray(v)
    n = fm.n
    if v.shape != (n,):
        raise DimensionMismatch(f"vector has shape {v.shape}, map has dimension {n}")
    dims = fm.ctx.factors
    w = fm.perm.apply(v.astype(complex, copy=False))
    left = 1
    for B, q in zip(fm.blocks, dims):
        right = n // (left * q)
        # (left, q, right) view: contract the middle axis
        w = np.matmul(B, w.reshape(left, q, right)).reshape(n)
        if counter is not None:
            counter.madds += left * right * B.shape[0] * B.shape[1]
        left *= q
    return fm.perm.apply_transpose(w)


@dataclass
class BenchReport:
    n: int
    factors: list[int]
    fast_ns: float
    madd_count: int
    dense_ns: float | None = None
    ratio: float | None = None
    repetitions: int = 11

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "factors": list(self.factors),
            "dense_ns": self.dense_ns,
            "fast_ns": self.fast_ns,
            "ratio": self.ratio,
            "madd_count": self.madd_count,
            "repetitions": self.repetitions,
        }

    CSV_HEADER = "n,factors,dense_ns,fast_ns,ratio,madd_count"

    def to_csv_row(self) -> str:
        def fmt(x):
            return "" if x is None else repr(x)

        factors = "x".join(str(f) for f in self.factors)
        return f"{self.n},{factors},{fmt(self.dense_ns)},{fmt(self.fast_ns)},{fmt(self.ratio)},{self.madd_count}"


def _median_ns(fn, v, repetitions: int) -> float:
    fn(v)  # warm-up
    samples = []
    for _ in range(repetitions):
        t0 = time.perf_counter_ns()
        fn(v)
        samples.append(time.perf_counter_ns() - t0)
    return float(statistics.median(samples))


def bench_apply(n: int, A: SL2Element, repetitions: int = 11, seed: int = 0) -> BenchReport:
    """Median wall-clock time of one dense matvec versus one factored application."""
    n = check_odd_modulus(n)
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    fm = factor_map(A)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    counter = OpCounter()
    fm.apply(v, counter)
    fast_ns = _median_ns(fm.apply, v, repetitions)
    dense_ns = ratio = None
    if n <= DENSE_LIMIT:
        U = fm.to_dense()
        dense_ns = _median_ns(U.dot, v, repetitions)
        ratio = dense_ns / fast_ns
    return BenchReport(n, fm.ctx.factors, fast_ns, counter.madds, dense_ns, ratio, repetitions)


def clock_shift_tensor(ctx: SinoContext, convention: str = "plain") -> tuple[np.ndarray, np.ndarray]:
    """(kron_i Q_i^{t_i}, kron_i P_i) for comparison with R Q R^T, R P R^T."""
    Qs, Ps = [], []
    for comp, t in zip(ctx.components, clock_block_powers(ctx, convention)):
        Q, P = clock_shift(comp.modulus)
        Qs.append(np.linalg.matrix_power(Q, t))
        Ps.append(P if convention == "plain" else np.linalg.matrix_power(P, comp.n))
    return tensor_compose(Qs), tensor_compose(Ps)
