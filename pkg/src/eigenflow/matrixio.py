"""File formats and deterministic serialization for the CLI.

Matrices travel as JSON with separate real/imaginary grids:

    {"n": 2, "re": [[0.0, 1.0], [1.0, 0.0]], "im": [[0.0, 0.0], [0.0, 0.0]]}

A triple file wraps a matrix with an eigenvalue-eigenvector candidate:

    {"matrix": {...}, "lambda": [re, im], "v": [[re, im], ...]}

All numeric output goes through shortest round-trip repr of Python floats,
so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

__all__ = [
    "MatrixFileError",
    "matrix_to_obj",
    "obj_to_matrix",
    "read_matrix",
    "write_matrix",
    "read_triple",
    "eigenpairs_to_obj",
    "dumps_json",
    "csv_line",
    "BENCH_CSV_HEADER",
    "TRACE_CSV_HEADER",
]

BENCH_CSV_HEADER = "seed,n,sigma,path_index,K,status,final_residual,wall_ms"
TRACE_CSV_HEADER = "path_index,step,tau,t,mu,residual,delta_tau"


class MatrixFileError(ValueError):
    """Malformed matrix/triple file; the message names the offending part."""


def _as_float(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise MatrixFileError(f"{where}: expected a number, got {type(x).__name__}")
    x = float(x)
    if not np.isfinite(x):
        raise MatrixFileError(f"{where}: entries must be finite")
    return x


def _grid(obj, n: int, name: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != n:
        raise MatrixFileError(f"field '{name}' must be a list of {n} rows")
    out = np.empty((n, n), dtype=np.float64)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != n:
            raise MatrixFileError(
                f"field '{name}', row {i}: expected {n} entries, got "
                f"{len(row) if isinstance(row, list) else type(row).__name__}"
            )
        for j, x in enumerate(row):
            out[i, j] = _as_float(x, f"field '{name}', row {i}, column {j}")
    return out


def obj_to_matrix(obj: Any) -> np.ndarray:
    if not isinstance(obj, dict):
        raise MatrixFileError("matrix file must be a JSON object")
    if "n" not in obj or "re" not in obj or "im" not in obj:
        raise MatrixFileError("matrix object needs fields 'n', 're' and 'im'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MatrixFileError("field 'n' must be a positive integer")
    return _grid(obj["re"], n, "re") + 1j * _grid(obj["im"], n, "im")


def matrix_to_obj(a: np.ndarray) -> dict:
    a = np.asarray(a, dtype=np.complex128)
    return {
        "n": int(a.shape[0]),
        "re": [[float(x) for x in row] for row in a.real],
        "im": [[float(x) for x in row] for row in a.imag],
    }


def read_matrix(path: str) -> np.ndarray:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise MatrixFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"{path} is not valid JSON: {exc}") from exc
    return obj_to_matrix(obj)


def write_matrix(path: str, a: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_json(matrix_to_obj(a)))
        fh.write("\n")


def _complex_from(obj, where: str) -> complex:
    if not isinstance(obj, list) or len(obj) != 2:
        raise MatrixFileError(f"{where}: expected [re, im]")
    return complex(_as_float(obj[0], where), _as_float(obj[1], where))


def read_triple(path: str):
    """Returns (matrix, lam, v) from a triple file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise MatrixFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "matrix" not in obj or "lambda" not in obj or "v" not in obj:
        raise MatrixFileError("triple file needs fields 'matrix', 'lambda' and 'v'")
    a = obj_to_matrix(obj["matrix"])
    lam = _complex_from(obj["lambda"], "field 'lambda'")
    vraw = obj["v"]
    if not isinstance(vraw, list) or len(vraw) != a.shape[0]:
        raise MatrixFileError(f"field 'v' must list {a.shape[0]} [re, im] pairs")
    v = np.array(
        [_complex_from(x, f"field 'v', entry {i}") for i, x in enumerate(vraw)],
        dtype=np.complex128,
    )
    return a, lam, v


def _sanitize(x):
    """numpy scalars to Python scalars; non-finite floats to None."""
    if isinstance(x, dict):
        return {k: _sanitize(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_sanitize(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if np.isfinite(x) else None
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def dumps_json(obj: Any) -> str:
    """Deterministic JSON: sanitized scalars, fixed key order, two-space indent."""
    return json.dumps(_sanitize(obj), indent=2, allow_nan=False)


def eigenpairs_to_obj(eset, status: str) -> dict:
    """The frozen eigenpair output schema."""
    pairs = []
    for p in eset.pairs:
        pairs.append(
            {
                "lambda": [float(p.lam.real), float(p.lam.imag)],
                "v": [[float(z.real), float(z.imag)] for z in p.v],
                "residual": float(p.residual),
                "mu": p.mu,
                "K": p.steps,
            }
        )
    return {"n": eset.n, "pairs": pairs, "status": status}


def fmt_float(x: float) -> str:
    """Shortest round-trip decimal form of a float for CSV cells."""
    return repr(float(x))


def csv_line(*cells) -> str:
    parts = []
    for c in cells:
        if isinstance(c, (np.floating, float)):
            parts.append(fmt_float(float(c)))
        else:
            parts.append(str(c))
    return ",".join(parts)
