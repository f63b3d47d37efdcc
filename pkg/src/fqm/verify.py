"""
Invariant suite run by ``fqm verify``.

Each check returns a dict with a name, status ("pass", "fail" or "n/a"),
the worst residual seen and the tolerance it was held to. Sampling uses
``numpy.random.default_rng(seed)`` (PCG64), so a given (n, samples, seed)
always produces the same report.
"""

from __future__ import annotations

import math

import numpy as np

from .crtfast import (
    OpCounter,
    block_weyl_index,
    build_R,
    clock_shift_tensor,
    factor_map,
    tensor_compose,
)
from .dynamics import order_mod
from .heisenberg import (
    DEFAULT_TOLERANCE,
    ToleranceConfig,
    clock_shift,
    max_abs,
    roots_of_unity,
    unitarity_residual,
    weyl_element,
    weyl_phase,
)
from .metaplectic import (
    align_phase,
    build_U,
    build_U_direct,
    delta,
    gauss_sum,
    intertwine_residual,
    oracle_U,
    phase_residual,
)
from .modarith import (
    SL2Element,
    crt_join_sl2,
    crt_split_sl2,
    random_sl2,
    sino_context,
    sino_decompose,
    sino_recompose,
    sl2_elements,
)

VERIFY_DENSE_LIMIT = 512
ORACLE_LIMIT = 21
ALL_PAIRS_LIMIT = 45
CAT_MAP = (1, 1, 1, 2)


def _result(name, residual, tol, *, detail=None, strict=False):
    ok = residual == 0 if strict else residual <= tol
    out = {"name": name, "status": "pass" if ok else "fail", "max_residual": float(residual), "tolerance": tol}
    if detail:
        out["detail"] = detail
    return out


def _na(name, reason):
    return {"name": name, "status": "n/a", "max_residual": None, "tolerance": None, "detail": reason}


def _index_pairs(n, rng, count):
    if n <= ALL_PAIRS_LIMIT:
        return [(r, s) for r in range(n) for s in range(n)], "all"
    picks = [(1, 0), (0, 1)] + [tuple(int(x) for x in rng.integers(0, n, 2)) for _ in range(count)]
    return picks, "sampled"


def run_verification(n: int, samples: int = 20, seed: int = 0, tol: ToleranceConfig | None = None) -> dict:
    tol = tol or DEFAULT_TOLERANCE
    ctx = sino_context(n)
    rng = np.random.default_rng(seed)
    tau = tol.tau(n)
    composite = len(ctx) > 1
    dense = n <= VERIFY_DENSE_LIMIT

    if n == 3:
        elements = list(sl2_elements(3))
        sampling = "exhaustive"
    else:
        elements = [random_sl2(n, rng) for _ in range(samples)]
        sampling = "random"

    checks: list[dict] = []

    # modular arithmetic
    def crt_bijection():
        images = {sino_decompose(r, ctx) for r in range(n)}
        bad = sum(sino_recompose(sino_decompose(r, ctx), ctx) != r for r in range(n))
        bad += n - len(images)
        return _result("crt_bijection", bad, 0, strict=True)

    def crt_homomorphism():
        if n <= 225:
            pairs = [(r, t) for r in range(n) for t in range(n)]
        else:
            pairs = [tuple(int(x) for x in rng.integers(0, n, 2)) for _ in range(20000)]
        bad = 0
        for r, t in pairs:
            dr, dt = sino_decompose(r, ctx), sino_decompose(t, ctx)
            prod = tuple((x * y) % c.modulus for x, y, c in zip(dr, dt, ctx.components))
            summ = tuple((x + y) % c.modulus for x, y, c in zip(dr, dt, ctx.components))
            bad += sino_decompose((r * t) % n, ctx) != prod
            bad += sino_decompose((r + t) % n, ctx) != summ
        return _result("crt_homomorphism", bad, 0, strict=True)

    def sl2_factorization():
        if not composite:
            return _na("sl2_factorization", "single prime-power factor")
        bad = 0
        for A, B in zip(elements, elements[1:] + elements[:1]):
            parts = [Ai @ Bi for Ai, Bi in zip(crt_split_sl2(A, ctx), crt_split_sl2(B, ctx))]
            bad += crt_split_sl2(A @ B, ctx) != parts
            bad += crt_join_sl2(crt_split_sl2(A, ctx), ctx) != A
        return _result("sl2_factorization", bad, 0, strict=True)

    # Heisenberg group
    def weyl_relation():
        Q, P = clock_shift(n)
        w = roots_of_unity(n)[1]
        return _result("weyl_relation", max_abs(Q @ P - w * P @ Q), 1e-12)

    def composition_law():
        if n <= 9:
            idx = [(r, s) for r in range(n) for s in range(n)]
            pairs = [(x, y) for x in idx for y in idx]
        else:
            pairs = [
                tuple(tuple(int(v) for v in rng.integers(0, n, 2)) for _ in range(2)) for _ in range(200)
            ]
        cache = {}

        def J(r, s):
            if (r, s) not in cache:
                cache[(r, s)] = weyl_element(r, s, n)
            return cache[(r, s)]

        worst = 0.0
        for (r, s), (r2, s2) in pairs:
            lhs = J(r, s) @ J(r2, s2)
            rhs = weyl_phase(r, s, r2, s2, n) * J((r + r2) % n, (s + s2) % n)
            worst = max(worst, max_abs(lhs - rhs))
        return _result("composition_law", worst, 1e-10)

    def heisenberg_factorization():
        if not composite:
            return _na("heisenberg_factorization", "single prime-power factor")
        idem = [c.idempotent % n for c in ctx.components]
        pairs, _ = _index_pairs(n, rng, 64)
        worst = 0.0
        for r, s in pairs:
            parts = [weyl_element(r * e % n, s * e % n, n) for e in idem]
            prod = parts[0]
            for Jp in parts[1:]:
                worst = max(worst, max_abs(prod @ Jp - Jp @ prod))
                prod = prod @ Jp
            worst = max(worst, max_abs(prod - weyl_element(r, s, n)))
        return _result("heisenberg_factorization", worst, tol.entry_tol)

    # metaplectic representation
    built: dict[int, np.ndarray] = {}

    def U_of(i):
        if i not in built:
            built[i] = build_U(elements[i], ctx)
        return built[i]

    def unitarity():
        if not dense:
            return _na("unitarity", f"dense checks limited to N <= {VERIFY_DENSE_LIMIT}")
        worst = max(unitarity_residual(U_of(i)) for i in range(len(elements)))
        return _result("unitarity", worst, tau)

    def intertwining():
        if not dense:
            return _na("intertwining", f"dense checks limited to N <= {VERIFY_DENSE_LIMIT}")
        pairs, how = _index_pairs(n, rng, 32)
        worst = max(intertwine_residual(U_of(i), A, pairs) for i, A in enumerate(elements))
        return _result("intertwining", worst, tau, detail=f"index pairs: {how}")

    def oracle_equivalence():
        if n > ORACLE_LIMIT:
            return _na("oracle_equivalence", f"oracle run only for N <= {ORACLE_LIMIT}")
        chosen = range(min(len(elements), 10))
        worst = max(phase_residual(oracle_U(elements[i]), U_of(i)) for i in chosen)
        return _result("oracle_equivalence", worst, tau)

    def direct_formula():
        if not dense:
            return _na("direct_formula", f"dense checks limited to N <= {VERIFY_DENSE_LIMIT}")
        usable = [i for i, A in enumerate(elements) if math.gcd(delta(A), n) == 1]
        if not usable:
            return _na("direct_formula", "no sampled element has delta invertible mod N")
        worst = max(phase_residual(build_U_direct(elements[i]), U_of(i)) for i in usable)
        return _result("direct_formula", worst, tau, detail=f"{len(usable)} elements")

    def cocycle():
        if not dense:
            return _na("representation_cocycle", f"dense checks limited to N <= {VERIFY_DENSE_LIMIT}")
        worst_mod = 0.0
        worst_res = 0.0
        trivial = 0
        count = min(len(elements), 10)
        for i in range(count):
            j = (i + 1) % len(elements)
            c, res = align_phase(build_U(elements[i] @ elements[j], ctx), U_of(i) @ U_of(j))
            worst_mod = max(worst_mod, abs(abs(c) - 1))
            worst_res = max(worst_res, res)
            trivial += abs(c - 1) <= 1e-9
        out = _result("representation_cocycle", worst_res, tau)
        if worst_mod > 1e-9:
            out["status"] = "fail"
        out["detail"] = f"c = 1 for {trivial} of {count} pairs; max ||c| - 1| = {worst_mod:.3e}"
        return out

    # CRT permutation and fast path
    perm = build_R(ctx)

    def r_permutation():
        bad = int(not np.array_equal(perm.inverse[perm.forward], np.arange(n)))
        bad += int(not np.array_equal(np.sort(perm.forward), np.arange(n)))
        return _result("r_permutation", bad, 0, strict=True, detail=f"convention: {perm.convention}")

    def r_shift_clock():
        if not composite:
            res = 0 if np.array_equal(perm.forward, np.arange(n)) else 1
            return _result("r_shift_clock_conjugation", res, 0, strict=True, detail="R is the identity")
        if not dense:
            return _na("r_shift_clock_conjugation", f"dense checks limited to N <= {VERIFY_DENSE_LIMIT}")
        R = perm.matrix()
        Q, P = clock_shift(n)
        Qt, Pt = clock_shift_tensor(ctx, perm.convention)
        worst = max(max_abs(R @ P @ R.T - Pt), max_abs(R @ Q @ R.T - Qt))
        return _result("r_shift_clock_conjugation", worst, tol.entry_tol)

    def r_weyl():
        if not composite:
            return _na("r_weyl_conjugation", "single prime-power factor")
        if not dense:
            return _na("r_weyl_conjugation", f"dense checks limited to N <= {VERIFY_DENSE_LIMIT}")
        R = perm.matrix()
        pairs, how = _index_pairs(n, rng, 64)
        worst = 0.0
        for r, s in pairs:
            blocks = [
                weyl_element(ri, si, c.modulus)
                for (ri, si), c in zip(block_weyl_index(r, s, ctx, perm.convention), ctx.components)
            ]
            worst = max(worst, max_abs(R @ weyl_element(r, s, n) @ R.T - tensor_compose(blocks)))
        return _result("r_weyl_conjugation", worst, tol.entry_tol, detail=f"index pairs: {how}")

    def tensor_factorization():
        if not composite:
            return _na("tensor_factorization", "single prime-power factor")
        if not dense:
            return _na("tensor_factorization", f"dense checks limited to N <= {VERIFY_DENSE_LIMIT}")
        R = perm.matrix()
        worst = 0.0
        for i, A in enumerate(elements):
            fm = factor_map(A, ctx)
            worst = max(worst, phase_residual(R @ U_of(i) @ R.T, tensor_compose(list(fm.blocks))))
        return _result("tensor_factorization", worst, tau)

    def fast_apply():
        worst = 0.0
        madd_bad = 0
        for i, A in enumerate(elements[: min(len(elements), 10)]):
            fm = factor_map(A, ctx)
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            counter = OpCounter()
            fast = fm.apply(v, counter)
            madd_bad += counter.madds != n * sum(ctx.factors)
            if dense:
                worst = max(worst, phase_residual(U_of(i) @ v, fast))
        out = _result("fast_apply", worst, tau)
        if madd_bad:
            out["status"] = "fail"
        out["detail"] = f"madd count per apply {n * sum(ctx.factors)} (dense {n * n})"
        return out

    def gauss_sums():
        worst = 0.0
        for x in range(1, n):
            if math.gcd(x, n) == 1:
                worst = max(worst, abs(abs(gauss_sum(x, n)) - 1))
        if composite:
            for x in range(n):
                prod = 1.0 + 0j
                for xi, c in zip(sino_decompose(x, ctx), ctx.components):
                    prod *= gauss_sum(c.m * xi, c.modulus)
                worst = max(worst, abs(gauss_sum(x, n) - prod))
        return _result("gauss_sums", worst, 1e-10)

    def quantum_period():
        if not dense:
            return _na("quantum_classical_period", f"dense checks limited to N <= {VERIFY_DENSE_LIMIT}")
        A = SL2Element(*CAT_MAP, n)
        t = order_mod(A)
        Ut = np.linalg.matrix_power(build_U(A, ctx), t)
        _, res = align_phase(np.eye(n), Ut)
        out = _result("quantum_classical_period", res, tau)
        out["detail"] = f"period {t} of [[1,1],[1,2]]"
        return out

    for fn in (
        crt_bijection,
        crt_homomorphism,
        sl2_factorization,
        weyl_relation,
        composition_law,
        heisenberg_factorization,
        unitarity,
        intertwining,
        oracle_equivalence,
        direct_formula,
        cocycle,
        r_permutation,
        r_shift_clock,
        r_weyl,
        tensor_factorization,
        fast_apply,
        gauss_sums,
        quantum_period,
    ):
        checks.append(fn())

    return {
        "n": n,
        "factors": ctx.factors,
        "samples": len(elements),
        "sampling": sampling,
        "seed": seed,
        "rng": "numpy PCG64",
        "tau": tau,
        "invariants": checks,
        "passed": all(c["status"] != "fail" for c in checks),
    }
