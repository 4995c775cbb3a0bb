"""Readers and writers for the on-disk formats.

Matrix (JSON)::

    {"rows": 4, "cols": n, "data": [row-major list of 4*n numbers]}

Matrix (CSV): four lines of ``n`` comma-separated numbers.

Transform (JSON)::

    {"g": [16 numbers, row-major], "d": [n numbers]}

Structure (JSON)::

    {"elements": [...], "relations": {"name": {"arity": k, "tuples": [[...], ...]}}}

Representation (JSON)::

    {"mapping": {"s": "i", ...}}
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
from numbers import Real
from pathlib import Path

import numpy as np

from .exceptions import InvalidInputError

MATRIX_ROWS = 4


def finite_number(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, Real):
        raise InvalidInputError(f"{what}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInputError(f"{what}: non-finite value {value!r}")
    return value


def matrix_from_json_obj(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise InvalidInputError("matrix JSON must be an object")
    try:
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    except KeyError as exc:
        raise InvalidInputError(f"matrix JSON missing key {exc.args[0]!r}") from None
    if rows != MATRIX_ROWS:
        raise InvalidInputError(f"matrix must have {MATRIX_ROWS} rows, got {rows!r}")
    if isinstance(cols, bool) or not isinstance(cols, int) or cols < 1:
        raise InvalidInputError(f"cols must be a positive integer, got {cols!r}")
    if not isinstance(data, list) or len(data) != rows * cols:
        n = len(data) if isinstance(data, list) else "non-list"
        raise InvalidInputError(f"data must hold rows*cols = {rows * cols} numbers, got {n}")
    values = [finite_number(v, f"data[{i}]") for i, v in enumerate(data)]
    return np.array(values, dtype=float).reshape(rows, cols)


def matrix_to_json_obj(A) -> dict:
    A = np.asarray(A, dtype=float)
    return {"rows": int(A.shape[0]), "cols": int(A.shape[1]), "data": [float(v) for v in A.ravel()]}


def matrix_from_csv_text(text: str) -> np.ndarray:
    lines = [row for row in csv.reader(_io.StringIO(text)) if any(cell.strip() for cell in row)]
    if len(lines) != MATRIX_ROWS:
        raise InvalidInputError(f"CSV matrix must have {MATRIX_ROWS} lines, got {len(lines)}")
    widths = {len(row) for row in lines}
    if len(widths) != 1:
        raise InvalidInputError(f"CSV rows have inconsistent lengths {sorted(widths)}")
    out = []
    for i, row in enumerate(lines):
        parsed = []
        for j, cell in enumerate(row):
            try:
                value = float(cell)
            except ValueError:
                raise InvalidInputError(f"CSV cell ({i + 1},{j + 1}) is not a number: {cell!r}") from None
            if not math.isfinite(value):
                raise InvalidInputError(f"CSV cell ({i + 1},{j + 1}) is non-finite")
            parsed.append(value)
        out.append(parsed)
    return np.array(out, dtype=float)


def load_matrix(path) -> np.ndarray:
    """Load a matrix from a ``.json`` or ``.csv`` file (chosen by suffix)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from None
    if path.suffix.lower() == ".csv":
        return matrix_from_csv_text(text)
    return matrix_from_json_obj(_loads(text, path))


def _loads(text: str, path) -> object:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: invalid JSON ({exc.msg})") from None


def transform_from_json_obj(obj) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(g, d)`` arrays; group-membership checks are left to the caller."""
    if not isinstance(obj, dict) or "g" not in obj or "d" not in obj:
        raise InvalidInputError('transform JSON must be an object with keys "g" and "d"')
    g, d = obj["g"], obj["d"]
    if not isinstance(g, list) or len(g) != 16:
        raise InvalidInputError("transform g must be a list of 16 numbers")
    if not isinstance(d, list) or not d:
        raise InvalidInputError("transform d must be a non-empty list of numbers")
    g = np.array([finite_number(v, f"g[{i}]") for i, v in enumerate(g)]).reshape(4, 4)
    d = np.array([finite_number(v, f"d[{i}]") for i, v in enumerate(d)])
    return g, d


def transform_to_json_obj(g, d) -> dict:
    return {"g": [float(v) for v in np.asarray(g).ravel()], "d": [float(v) for v in np.asarray(d)]}


def load_json(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from None
    return _loads(text, path)


def dumps(obj) -> str:
    """Deterministic JSON serialization used for all command output."""
    return json.dumps(_plain(obj), sort_keys=True, allow_nan=False)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj
