"""Zapis i odczyt macierzy w formacie JSON {rows, cols, re, im} (wierszami)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np
import numpy.typing as npt

from .decomposition import ComplexMatrix, ComplexVector, DimensionMismatch


def matrix_to_json(A: npt.ArrayLike) -> dict[str, object]:
    matrix = np.asarray(A, dtype=np.complex128)
    if matrix.ndim != 2:
        raise DimensionMismatch("2 wymiary", matrix.ndim)
    flat = matrix.reshape(-1)
    return {
        "rows": int(matrix.shape[0]),
        "cols": int(matrix.shape[1]),
        "re": [float(v) for v in flat.real],
        "im": [float(v) for v in flat.imag],
    }


def matrix_from_json(payload: Mapping[str, Any]) -> ComplexMatrix:
    rows = int(payload["rows"])
    cols = int(payload["cols"])
    re = np.asarray(payload["re"], dtype=float)
    im = np.asarray(payload.get("im", [0.0] * re.size), dtype=float)
    if re.size != rows * cols or im.size != rows * cols:
        raise DimensionMismatch(rows * cols, (re.size, im.size), what="liczba wpisów")
    return (re + 1j * im).reshape(rows, cols)


def vector_from_json(payload: Mapping[str, Any] | Sequence[float]) -> ComplexVector:
    """Wektor jako lista liczb rzeczywistych albo obiekt {re, im}."""

    if isinstance(payload, Mapping):
        re = np.asarray(payload["re"], dtype=float)
        im = np.asarray(payload.get("im", [0.0] * re.size), dtype=float)
        if re.size != im.size:
            raise DimensionMismatch(re.size, im.size, what="wektor")
        return re + 1j * im
    return np.asarray(payload, dtype=np.complex128)


def vector_to_json(v: npt.ArrayLike) -> dict[str, list[float]]:
    vector = np.asarray(v, dtype=np.complex128).reshape(-1)
    return {"re": [float(x) for x in vector.real], "im": [float(x) for x in vector.imag]}


def load_matrix_file(path: Path) -> ComplexMatrix:
    return matrix_from_json(json.loads(Path(path).read_text(encoding="utf-8")))
