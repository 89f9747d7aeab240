"""JSON encoding for polynomials, root multisets, operators, domains and reports.

Complex numbers are ``[re, im]`` pairs; infinities are the string ``"inf"``.
"""

from __future__ import annotations

import json
from math import isinf, isnan

import numpy as np

from .dalgebra import (DAlgOperator, MatrixOperator, Operator, hk_operator,
                       reflection_matrix, shift_operator)
from .errors import PolyPerturbError
from .poly import Poly, from_phi, phi_coords
from .roots import RootMultiset
from .star import ClosedDisk, ClosedHalfPlane, DiskExterior


class SchemaError(PolyPerturbError, ValueError):
    """Input does not match the expected JSON shape."""


def load_document(text_or_path: str):
    """Parse inline JSON, or read it from a file when the argument is a path."""
    text = text_or_path
    stripped = text.lstrip()
    if not stripped.startswith(("{", "[")):
        try:
            with open(text_or_path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise SchemaError(f"not JSON and not a readable file: {text_or_path!r}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc


# --- scalars --------------------------------------------------------------

def enc_complex(z) -> list:
    z = complex(z)
    return [enc_real(z.real), enc_real(z.imag)]


def dec_complex(v) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, list) and len(v) == 2:
        return complex(dec_real(v[0]), dec_real(v[1]))
    raise SchemaError(f"expected [re, im], got {v!r}")


def enc_real(x):
    if x is None:
        return None
    x = float(x)
    if isnan(x):
        return "nan"
    if isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def dec_real(v) -> float:
    if isinstance(v, str):
        if v in ("inf", "-inf", "nan"):
            return float(v)
        raise SchemaError(f"expected a number, got {v!r}")
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(f"expected a number, got {v!r}")
    return float(v)


def _dec_complex_list(v) -> np.ndarray:
    if not isinstance(v, list):
        raise SchemaError("expected a list of [re, im] pairs")
    return np.array([dec_complex(x) for x in v], dtype=complex)


def _require(obj, key):
    if not isinstance(obj, dict):
        raise SchemaError(f"expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise SchemaError(f"missing key {key!r}")
    return obj[key]


def _dec_int(v, name) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"{name} must be an integer")
    return v


# --- library types ----------------------------------------------------------

def enc_poly(p: Poly, basis: str = "monomial") -> dict:
    coeffs = p.coeffs if basis == "monomial" else phi_coords(p)
    return {"n": p.cap, "basis": basis, "coeffs": [enc_complex(c) for c in coeffs]}


def dec_poly(obj, n: int | None = None) -> Poly:
    coeffs = _dec_complex_list(_require(obj, "coeffs"))
    basis = obj.get("basis", "monomial")
    cap = obj.get("n", n if n is not None else coeffs.size - 1)
    cap = _dec_int(cap, "n")
    if coeffs.size > cap + 1:
        if np.any(coeffs[cap + 1:] != 0):
            raise SchemaError(f"{coeffs.size} coefficients exceed capacity n={cap}")
        coeffs = coeffs[:cap + 1]
    coeffs = np.concatenate([coeffs, np.zeros(cap + 1 - coeffs.size, dtype=complex)])
    if basis == "monomial":
        return Poly(cap, coeffs)
    if basis == "phi":
        return from_phi(cap, coeffs)
    raise SchemaError(f"unknown basis {basis!r}")


def enc_multiset(z: RootMultiset) -> dict:
    if z.kind == "finite":
        return {"kind": "finite", "points": [enc_complex(p) for p in z.points]}
    return {"kind": z.kind}


def dec_multiset(obj) -> RootMultiset:
    kind = _require(obj, "kind")
    if kind == "finite":
        return RootMultiset.finite(_dec_complex_list(_require(obj, "points")))
    if kind == "empty":
        return RootMultiset.empty()
    if kind == "whole_plane":
        return RootMultiset.whole_plane()
    raise SchemaError(f"unknown multiset kind {kind!r}")


def enc_operator(op: Operator) -> dict:
    if isinstance(op, DAlgOperator):
        return {"kind": "dalg", "n": op.cap, "a": [enc_complex(c) for c in op.a]}
    return {"kind": "matrix", "n": op.cap,
            "rows": [[enc_complex(c) for c in row] for row in op.entries]}


def dec_operator(obj, n: int | None = None) -> Operator:
    kind = _require(obj, "kind")
    cap = obj.get("n", n)
    if kind == "dalg":
        a = _dec_complex_list(_require(obj, "a"))
        cap = a.size - 1 if cap is None else _dec_int(cap, "n")
        return DAlgOperator(cap, a)
    if kind == "matrix":
        rows = _require(obj, "rows")
        if not isinstance(rows, list):
            raise SchemaError("rows must be a list")
        decoded = [_dec_complex_list(r) for r in rows]
        if len({r.size for r in decoded}) > 1:
            raise SchemaError("matrix rows have different lengths")
        m = np.array(decoded)
        cap = len(rows) - 1 if cap is None else _dec_int(cap, "n")
        return MatrixOperator(cap, m)
    if cap is None:
        raise SchemaError(f"operator kind {kind!r} needs n")
    cap = _dec_int(cap, "n")
    if kind == "shift":
        return shift_operator(dec_complex(_require(obj, "alpha")), cap)
    if kind == "hk":
        return hk_operator(_dec_int(_require(obj, "k"), "k"),
                           dec_complex(_require(obj, "gamma")), cap)
    if kind == "reflect":
        return reflection_matrix(cap)
    raise SchemaError(f"unknown operator kind {kind!r}")


def dec_domain(obj):
    kind = _require(obj, "kind")
    if kind in ("disk", "disk_exterior"):
        center = dec_complex(_require(obj, "center"))
        radius = dec_real(_require(obj, "radius"))
        return ClosedDisk(center, radius) if kind == "disk" else DiskExterior(center, radius)
    if kind == "half_plane":
        return ClosedHalfPlane(dec_complex(_require(obj, "normal")),
                               dec_real(_require(obj, "offset")))
    raise SchemaError(f"unknown domain kind {kind!r}")


def enc_domain(omega) -> dict:
    if isinstance(omega, ClosedHalfPlane):
        return {"kind": "half_plane", "normal": enc_complex(omega.normal),
                "offset": enc_real(omega.offset)}
    kind = "disk" if isinstance(omega, ClosedDisk) else "disk_exterior"
    return {"kind": kind, "center": enc_complex(omega.center), "radius": enc_real(omega.radius)}


def to_jsonable(x):
    """Recursively convert numpy scalars, complex numbers and infinities."""
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [to_jsonable(v) for v in x.tolist()]
    if isinstance(x, Poly):
        return enc_poly(x)
    if isinstance(x, RootMultiset):
        return enc_multiset(x)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return enc_complex(x)
    if isinstance(x, (float, np.floating)):
        return enc_real(x)
    return x


def dumps(x) -> str:
    return json.dumps(to_jsonable(x), sort_keys=True)
