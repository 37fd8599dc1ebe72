"""Matrix file format.

A matrix file is the JSON object ``{"n": n, "rows": [[[re, im], ...], ...]}``.
Numbers are written as decimal strings produced by ``repr(float)``, the
shortest string that parses back to the same double, so write-then-read is
bit-exact.  Plain JSON numbers are accepted on input.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from sdlab.errors import SdlabError
from sdlab.linalg import as_matrix


class MatrixFormatError(SdlabError):
    pass


def matrix_to_obj(x) -> dict:
    x = as_matrix(x)
    rows = [[[repr(float(v.real)), repr(float(v.imag))] for v in row] for row in x]
    return {"n": int(x.shape[0]), "rows": rows}


def _num(v) -> float:
    if isinstance(v, bool):
        raise MatrixFormatError("booleans are not matrix entries")
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, str):
        try:
            return float(v)
        except ValueError:
            raise MatrixFormatError(f"bad number {v!r}") from None
    raise MatrixFormatError(f"bad entry {v!r}")


def matrix_from_obj(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "n" not in obj or "rows" not in obj:
        raise MatrixFormatError('matrix object needs "n" and "rows"')
    n = obj["n"]
    rows = obj["rows"]
    if not isinstance(n, int) or n < 1:
        raise MatrixFormatError(f'"n" must be a positive integer, got {n!r}')
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise MatrixFormatError(f'"rows" must be {n} rows of {n} entries')
    out = np.empty((n, n), dtype=np.complex128)
    for i, row in enumerate(rows):
        for j, e in enumerate(row):
            if isinstance(e, list) and len(e) == 2:
                out[i, j] = complex(_num(e[0]), _num(e[1]))
            else:
                out[i, j] = _num(e)
    if not np.all(np.isfinite(out)):
        raise MatrixFormatError("non-finite matrix entry")
    return out


def write_matrix(path, x) -> None:
    Path(path).write_text(json.dumps(matrix_to_obj(x)) + "\n")


def read_matrix(path) -> np.ndarray:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{path}: not valid JSON ({exc})") from exc
    return matrix_from_obj(obj)
