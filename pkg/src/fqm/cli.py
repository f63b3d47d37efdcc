"""
Command line interface.

    fqm build  --n N --sl2 a,b,c,d [--mode dense|factored] [--out FILE]
    fqm apply  --map FILE --vec FILE [--fast] [--out FILE]
    fqm verify --n N [--samples K] [--seed S]
    fqm bench  --n N --sl2 a,b,c,d [--reps R] [--format csv|json]
    fqm orbit  --n N --sl2 a,b,c,d [--point q,p] [--format json|csv]
    fqm factor --n N

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
FILE may be ``-`` for stdin/stdout.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import documents as docs
from .crtfast import BenchReport, bench_apply, factor_map
from .dynamics import period_report
from .errors import DimensionMismatch, FQMError
from .heisenberg import DENSE_LIMIT, ToleranceConfig
from .metaplectic import build_U, phase_residual
from .modarith import SL2Element, check_odd_modulus, sino_context
from .verify import run_verification


class UsageError(Exception):
    pass


def _parse_ints(text: str, count: int, what: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"{what} must be {count} comma-separated integers")
    if len(values) != count:
        raise UsageError(f"{what} must be {count} comma-separated integers")
    return values


def _element(args) -> SL2Element:
    n = check_odd_modulus(args.n)
    return SL2Element(*_parse_ints(args.sl2, 4, "--sl2"), n)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_build(args) -> int:
    A = _element(args)
    if args.mode == "factored":
        doc = docs.factored_doc(factor_map(A))
    else:
        if A.modulus > DENSE_LIMIT:
            raise UsageError(f"dense mode is limited to N <= {DENSE_LIMIT}; use --mode factored")
        doc = docs.unitary_doc(build_U(A), A)
    _write(docs.dumps(doc), args.out)
    return 0


def cmd_apply(args) -> int:
    if args.map == "-" and args.vec == "-":
        raise UsageError("only one of --map and --vec can be read from stdin")
    map_doc = docs.parse(_read(args.map))
    v = docs.load_vector(docs.parse(_read(args.vec)))
    kind = map_doc.get("kind")
    fm = dense = None
    if kind == "factored":
        fm = docs.load_factored(map_doc)
    elif kind == "unitary":
        dense = docs.load_unitary(map_doc)
        if args.fast:
            if "sl2" not in map_doc:
                raise UsageError("--fast needs a factored map or a unitary document with an sl2 field")
            fm = factor_map(docs.load_sl2({"n": map_doc["n"], **map_doc["sl2"]}))
    elif kind == "permutation":
        perm = docs.load_permutation(map_doc)
        if len(v) != perm.n:
            raise DimensionMismatch(f"vector length {len(v)} does not match map dimension {perm.n}")
        _write(docs.dumps(docs.vector_doc(perm.apply(v), mode="permutation")), args.out)
        return 0
    else:
        raise UsageError(f"unsupported map kind {kind!r}")

    n = fm.n if fm is not None else dense.shape[0]
    if len(v) != n:
        raise DimensionMismatch(f"vector length {len(v)} does not match map dimension {n}")

    if args.fast:
        out = fm.apply(v)
        extra = {"mode": "fast"}
        if n <= DENSE_LIMIT:
            reference = (dense if dense is not None else fm.to_dense()) @ v
            extra["max_abs_diff"] = phase_residual(reference, out)
            extra["tolerance"] = ToleranceConfig.from_env().tau(n)
    else:
        if dense is None:
            if n > DENSE_LIMIT:
                raise UsageError(f"dense application is limited to N <= {DENSE_LIMIT}; use --fast")
            dense = fm.to_dense()
        out = dense @ v
        extra = {"mode": "dense"}
    _write(docs.dumps(docs.vector_doc(out, **extra)), args.out)
    return 0


def cmd_verify(args) -> int:
    n = check_odd_modulus(args.n)
    report = run_verification(n, samples=args.samples, seed=args.seed, tol=ToleranceConfig.from_env())
    _write(docs.dumps(report), args.out)
    return 0 if report["passed"] else 1


def cmd_bench(args) -> int:
    A = _element(args)
    report = bench_apply(A.modulus, A, repetitions=args.reps, seed=args.seed)
    if args.format == "csv":
        text = BenchReport.CSV_HEADER + "\n" + report.to_csv_row() + "\n"
    else:
        text = docs.dumps(report.to_dict())
    _write(text, args.out)
    return 0


def cmd_orbit(args) -> int:
    A = _element(args)
    point = tuple(_parse_ints(args.point, 2, "--point")) if args.point else None
    if point is not None and not all(0 <= x < A.modulus for x in point):
        raise UsageError(f"--point must lie in [0, {A.modulus})^2")
    report = period_report(A, point)
    if args.format == "csv":
        rows = ["orbit_length,count"] + [f"{k},{v}" for k, v in report["orbit_lengths"].items()]
        text = f"# n={report['n']} period={report['period']}\n" + "\n".join(rows) + "\n"
    else:
        text = docs.dumps(report)
    _write(text, args.out)
    return 0


def cmd_factor(args) -> int:
    ctx = sino_context(args.n)
    doc = {
        "modulus": ctx.modulus,
        "factors": [c.modulus for c in ctx.components],
        "primes": [c.prime for c in ctx.components],
        "exponents": [c.exponent for c in ctx.components],
        "m": [c.m for c in ctx.components],
        "n": [c.n for c in ctx.components],
    }
    _write(docs.dumps(doc), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fqm", description="Finite quantum mechanics over Z_N for odd N.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build U(A) as a dense or factored map")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sl2", required=True, metavar="a,b,c,d")
    p.add_argument("--mode", choices=("dense", "factored"), default="dense")
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("apply", help="apply a map document to a vector document")
    p.add_argument("--map", required=True)
    p.add_argument("--vec", required=True)
    p.add_argument("--fast", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("verify", help="run the invariant suite at modulus N")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time dense versus factored application")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sl2", required=True, metavar="a,b,c,d")
    p.add_argument("--reps", type=int, default=11)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("orbit", help="classical period and orbits of A on the torus")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sl2", required=True, metavar="a,b,c,d")
    p.add_argument("--point", metavar="q,p")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("factor", help="CRT data for N")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_factor)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FQMError, UsageError, OSError, ValueError) as exc:
        print(f"fqm {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
