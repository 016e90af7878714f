"""JSON and CSV formats used by the command line.

Matrix document::

    {"n": 2, "entries": [[-1, -2.5], [-0.5, -2]]}

Interval document (nominal in ``entries``)::

    {"n": 2, "entries": [[...], [...]],
     "diag_lo": [..n..], "diag_hi": [..n..],
     "offdiag_mag": [[...], [...]]}          # zero diagonal

Synthesis problem::

    {"A0": [[...]], "B0": [[...]], "deltaA_mag": [[...]] (optional),
     "b_range": [lo, hi] (default [1, 1]), "F_bar": 0.0, "F": [...] (optional),
     "alpha_rate": 0.5, "epsilon": 1e-3, "scale_cap": 100, "vertex_cap": 8}

System (for simulation)::

    {"matrix": <matrix or interval document>, "F": [..n..],
     "disturbance": {"kind": "sin", "freq": 1.0, "amp": 1.0},
     "x0": [..n..], "t_end": 20.0, "step": 1e-3, "switch_period": 0.5}

Overlay points are CSV lines ``re,im``.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .matcore import IntervalMatrix, RealMatrix
from .synthesis import SynthesisProblem

__all__ = [
    "InputError",
    "parse_matrix",
    "matrix_to_json",
    "parse_problem",
    "parse_system",
    "read_json",
    "read_points",
    "dumps",
]


class InputError(ValueError):
    """Malformed input document; the message names the offending field."""


def _number(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InputError(f"{where} is not a number: {v!r}")
    v = float(v)
    if not np.isfinite(v):
        raise InputError(f"{where} is not finite: {v!r}")
    return v


def _vector(v, n, where):
    if not isinstance(v, list):
        raise InputError(f"{where} must be an array")
    if n is not None and len(v) != n:
        raise InputError(f"{where} has {len(v)} entries, expected {n}")
    return np.array([_number(x, f"{where}[{i}]") for i, x in enumerate(v)])


def _square(rows, n, where):
    if not isinstance(rows, list):
        raise InputError(f"{where} must be an array of rows")
    if n is None:
        n = len(rows)
    if len(rows) != n:
        raise InputError(f"{where} has {len(rows)} rows, expected n = {n}")
    return np.array([_vector(r, n, f"{where}[{i}]") for i, r in enumerate(rows)]).reshape(n, n)


def _rect(rows, where):
    if not isinstance(rows, list) or not rows:
        raise InputError(f"{where} must be a non-empty array")
    if not isinstance(rows[0], list):
        return _vector(rows, None, where)[:, None]
    width = len(rows[0])
    return np.array([_vector(r, width, f"{where}[{i}]") for i, r in enumerate(rows)])


def parse_matrix(doc):
    """Matrix or interval document -> ``RealMatrix`` or ``IntervalMatrix``."""
    if not isinstance(doc, dict):
        raise InputError("matrix document must be a JSON object")
    if "entries" not in doc:
        raise InputError("matrix document lacks 'entries'")
    n = doc.get("n")
    if n is not None and (isinstance(n, bool) or not isinstance(n, int) or n < 1):
        raise InputError(f"'n' must be a positive integer, got {n!r}")
    q = _square(doc["entries"], n, "entries")
    n = q.shape[0]
    keys = ("diag_lo", "diag_hi", "offdiag_mag")
    if not any(k in doc for k in keys):
        return RealMatrix(q)
    lo = _vector(doc.get("diag_lo", [0.0] * n), n, "diag_lo")
    hi = _vector(doc.get("diag_hi", [0.0] * n), n, "diag_hi")
    m = _square(doc.get("offdiag_mag", [[0.0] * n for _ in range(n)]), n, "offdiag_mag")
    for i in range(n):
        if lo[i] > hi[i]:
            raise InputError(f"diag_lo[{i}] = {lo[i]} exceeds diag_hi[{i}] = {hi[i]}")
        if m[i, i] != 0:
            raise InputError(f"offdiag_mag[{i}][{i}] must be 0")
        for j in range(n):
            if m[i, j] < 0:
                raise InputError(f"offdiag_mag[{i}][{j}] is negative")
    return IntervalMatrix(q, lo, hi, m)


def matrix_to_json(q) -> dict:
    if isinstance(q, IntervalMatrix):
        return {
            "n": q.n,
            "entries": q.nominal.tolist(),
            "diag_lo": q.diag_lo.tolist(),
            "diag_hi": q.diag_hi.tolist(),
            "offdiag_mag": q.offdiag_mag.tolist(),
        }
    a = np.asarray(q, dtype=float)
    return {"n": a.shape[0], "entries": a.tolist()}


def parse_problem(doc) -> SynthesisProblem:
    if not isinstance(doc, dict):
        raise InputError("problem document must be a JSON object")
    for key in ("A0", "B0"):
        if key not in doc:
            raise InputError(f"problem document lacks {key!r}")
    A0 = _square(doc["A0"], None, "A0")
    n = A0.shape[0]
    kwargs = {}
    if "deltaA_mag" in doc:
        kwargs["deltaA_mag"] = _square(doc["deltaA_mag"], n, "deltaA_mag")
    if "b_range" in doc:
        kwargs["b_range"] = tuple(_vector(doc["b_range"], 2, "b_range"))
    if doc.get("F") is not None:
        kwargs["F"] = _rect(doc["F"], "F")
    for key in ("F_bar", "alpha_rate", "epsilon", "scale_cap"):
        if key in doc:
            kwargs[key] = _number(doc[key], key)
    if "vertex_cap" in doc:
        kwargs["vertex_cap"] = int(_number(doc["vertex_cap"], "vertex_cap"))
    try:
        return SynthesisProblem(A0, _rect(doc["B0"], "B0"), **kwargs)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def parse_system(doc) -> dict:
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise InputError("system document must be an object with a 'matrix' entry")
    m = parse_matrix(doc["matrix"])
    if isinstance(m, RealMatrix):
        m = IntervalMatrix.exact(m.entries)
    n = m.n
    dist = doc.get("disturbance", {"kind": "const", "amp": 0.0})
    if not isinstance(dist, dict):
        raise InputError("'disturbance' must be an object")
    out = {
        "matrix": m,
        "F": _vector(doc.get("F", [0.0] * n), n, "F"),
        "disturbance": {
            "kind": str(dist.get("kind", "sin")),
            "freq": _number(dist.get("freq", 1.0), "disturbance.freq"),
            "amp": _number(dist.get("amp", 1.0), "disturbance.amp"),
        },
        "x0": _vector(doc.get("x0", [1.0] * n), n, "x0"),
        "t_end": _number(doc.get("t_end", 20.0), "t_end"),
        "step": _number(doc.get("step", 1e-3), "step"),
        "switch_period": _number(doc.get("switch_period", 0.5), "switch_period"),
    }
    if not out["t_end"] >= out["step"] > 0:
        raise InputError("need t_end >= step > 0")
    if not out["switch_period"] > 0:
        raise InputError("switch_period must be positive")
    return out


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def read_points(text) -> np.ndarray:
    """Parse ``re,im`` lines (blank lines and ``#`` comments skipped)."""
    pts = []
    for k, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or not row[0].strip() or row[0].lstrip().startswith("#"):
            continue
        if len(row) != 2:
            raise InputError(f"points line {k}: expected 're,im', got {len(row)} fields")
        try:
            re, im = float(row[0]), float(row[1])
        except ValueError as exc:
            raise InputError(f"points line {k}: {exc}") from exc
        if not (np.isfinite(re) and np.isfinite(im)):
            raise InputError(f"points line {k}: non-finite value")
        pts.append(complex(re, im))
    return np.array(pts, dtype=complex)


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    if hasattr(o, "to_dict"):
        return o.to_dict()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, default=_default)
