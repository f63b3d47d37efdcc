"""
JSON documents exchanged by the command line tool.

All indices are 0-based and matrices are row-major. Complex numbers are
``[re, im]`` pairs. Floats are written with 17 significant digits so that
output is byte-identical across runs and round-trips exactly.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .crtfast import FactoredMap, PermutationMap, build_R
from .errors import DimensionMismatch, FQMError
from .modarith import SL2Element, sino_context


class DocumentError(FQMError):
    pass


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite value in document")
    s = format(x, ".17g")
    if s == "-0":
        s = "0"
    if "." not in s and "e" not in s and "n" not in s:
        s += ".0"
    return s


def _encode(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    return _encode(obj) + "\n"


def complex_pairs(values) -> list[list[float]]:
    flat = np.asarray(values, dtype=complex).ravel()
    return [[float(z.real), float(z.imag)] for z in flat]


def _complex_array(pairs, count: int) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.shape != (count, 2):
        raise DocumentError(f"expected {count} [re, im] pairs, got shape {arr.shape}")
    return arr[:, 0] + 1j * arr[:, 1]


def sl2_doc(A: SL2Element) -> dict:
    return {"n": A.modulus, "kind": "sl2", "data": {"a": A.a, "b": A.b, "c": A.c, "d": A.d}}


def _sl2_data(A: SL2Element) -> dict:
    return {"a": A.a, "b": A.b, "c": A.c, "d": A.d}


def unitary_doc(U: np.ndarray, A: SL2Element | None = None) -> dict:
    doc = {"n": U.shape[0], "kind": "unitary", "data": complex_pairs(U)}
    if A is not None:
        doc["sl2"] = _sl2_data(A)
    return doc


def permutation_doc(perm: PermutationMap) -> dict:
    return {"n": perm.n, "kind": "permutation", "data": perm.forward.tolist(), "convention": perm.convention}


def factored_doc(fm: FactoredMap) -> dict:
    doc = {
        "n": fm.n,
        "kind": "factored",
        "factors": fm.ctx.factors,
        "permutation": permutation_doc(fm.perm),
        "blocks": [unitary_doc(B) for B in fm.blocks],
    }
    if fm.element is not None:
        doc["sl2"] = _sl2_data(fm.element)
    return doc


def vector_doc(v: np.ndarray, **extra) -> dict:
    doc = {"n": len(v), "kind": "vector", "data": complex_pairs(v)}
    doc.update(extra)
    return doc


def _require(doc, key):
    if not isinstance(doc, dict) or key not in doc:
        raise DocumentError(f"document is missing field {key!r}")
    return doc[key]


def _n(doc) -> int:
    n = _require(doc, "n")
    if not isinstance(n, int) or n < 1:
        raise DocumentError(f"invalid dimension {n!r}")
    return n


def load_sl2(doc: dict) -> SL2Element:
    data = doc if "a" in doc else _require(doc, "data")
    return SL2Element(*(int(_require(data, k)) for k in "abcd"), _n(doc))


def load_unitary(doc: dict) -> np.ndarray:
    n = _n(doc)
    return _complex_array(_require(doc, "data"), n * n).reshape(n, n)


def load_vector(doc: dict) -> np.ndarray:
    n = _n(doc)
    if _require(doc, "kind") != "vector":
        raise DocumentError("expected a vector document")
    return _complex_array(_require(doc, "data"), n)


def load_permutation(doc: dict) -> PermutationMap:
    n = _n(doc)
    forward = np.asarray(_require(doc, "data"), dtype=np.int64)
    if forward.shape != (n,) or not np.array_equal(np.sort(forward), np.arange(n)):
        raise DocumentError("permutation data is not a bijection on range(n)")
    inverse = np.empty_like(forward)
    inverse[forward] = np.arange(n)
    return PermutationMap(n, forward, inverse, doc.get("convention", "plain"))


def load_factored(doc: dict) -> FactoredMap:
    n = _n(doc)
    ctx = sino_context(n)
    if list(_require(doc, "factors")) != ctx.factors:
        raise DocumentError(f"factors {doc['factors']} do not match {ctx.factors}")
    perm = load_permutation(_require(doc, "permutation"))
    expected = build_R(ctx)
    if perm.n != n or not np.array_equal(perm.forward, expected.forward):
        raise DocumentError("permutation does not match the CRT permutation for n")
    blocks = tuple(load_unitary(b) for b in _require(doc, "blocks"))
    if [B.shape[0] for B in blocks] != ctx.factors:
        raise DimensionMismatch("block dimensions do not match the factors")
    element = SL2Element(*(int(doc["sl2"][k]) for k in "abcd"), n) if "sl2" in doc else None
    return FactoredMap(ctx, perm, blocks, element)


def parse(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    return doc
