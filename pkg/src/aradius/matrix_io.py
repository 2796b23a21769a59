"""Matrix JSON: {"n": int, "re": [[...]], "im": [[...]]}, rows in order."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import MalformedMatrixError


def matrix_to_dict(M) -> dict:
    M = np.asarray(M, dtype=complex)
    return {"n": int(M.shape[0]), "re": M.real.tolist(), "im": M.imag.tolist()}


def matrix_from_dict(d) -> np.ndarray:
    if not isinstance(d, dict) or not {"n", "re", "im"} <= set(d):
        raise MalformedMatrixError('matrix JSON needs keys "n", "re", "im"')
    n = d["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MalformedMatrixError('"n" must be a positive integer')
    try:
        re = np.array(d["re"], dtype=float)
        im = np.array(d["im"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise MalformedMatrixError(f"matrix entries must be numbers: {exc}") from None
    if re.shape != (n, n) or im.shape != (n, n):
        raise MalformedMatrixError(f'"re" and "im" must be {n}x{n}')
    if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
        raise MalformedMatrixError("matrix entries must be finite")
    return re + 1j * im


def load_matrix(path) -> np.ndarray:
    """Read a matrix JSON file. FileNotFoundError and json.JSONDecodeError propagate."""
    text = Path(path).read_text()
    return matrix_from_dict(json.loads(text))


def save_matrix(M, path) -> None:
    Path(path).write_text(json.dumps(matrix_to_dict(M)) + "\n")
