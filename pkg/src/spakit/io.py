"""JSON file formats.

Matrices are stored row-major as ``[re, im]`` pairs. Python's float repr is
the shortest string that round-trips, so files re-parse to bit-identical
arrays. Every document carries ``"schema": "spa-kit/1"``.
"""
from __future__ import annotations

import json
import math
import re
import sys
from typing import Any

import numpy as np

from .povm import MeasurementModel, PovmElement

SCHEMA = "spa-kit/1"


class FormatError(ValueError):
    """A document does not follow the expected schema."""


def matrix_to_dict(m, metadata: dict[str, Any] | None = None) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    doc = {
        "schema": SCHEMA,
        "kind": "matrix",
        "dim": int(m.shape[0]),
        "data": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }
    if metadata:
        doc["metadata"] = {str(k): str(v) for k, v in metadata.items()}
    return doc


def _check_schema(doc: Any) -> None:
    if not isinstance(doc, dict):
        raise FormatError("document must be a JSON object")
    if doc.get("schema") != SCHEMA:
        raise FormatError(f"unsupported schema {doc.get('schema')!r}, expected {SCHEMA!r}")


def matrix_from_dict(doc: Any) -> tuple[np.ndarray, dict[str, str]]:
    """Parse a matrix document; returns the matrix and its metadata map."""
    if isinstance(doc, dict) and "schema" in doc:
        _check_schema(doc)
    elif not isinstance(doc, dict):
        raise FormatError("matrix must be a JSON object")
    try:
        dim = int(doc["dim"])
        data = doc["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"matrix needs integer 'dim' and list 'data': {exc}") from None
    if dim < 1 or not isinstance(data, list) or len(data) != dim * dim:
        raise FormatError(f"matrix 'data' must hold dim^2 = {dim * dim} entries")
    vals = np.empty(dim * dim, dtype=np.complex128)
    for i, pair in enumerate(data):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise FormatError(f"entry {i} is not an [re, im] pair")
        real, imag = pair
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (real, imag)):
            raise FormatError(f"entry {i} has non-numeric parts")
        if not (math.isfinite(real) and math.isfinite(imag)):
            raise FormatError(f"entry {i} is not finite")
        vals[i] = complex(real, imag)
    meta = doc.get("metadata") or {}
    if not isinstance(meta, dict):
        raise FormatError("'metadata' must be an object")
    return vals.reshape(dim, dim), {str(k): str(v) for k, v in meta.items()}


def model_to_dict(model: MeasurementModel) -> dict:
    def bare(m):
        d = matrix_to_dict(m)
        return {"dim": d["dim"], "data": d["data"]}

    return {
        "schema": SCHEMA,
        "kind": "measurement-model",
        "dim_in": model.dim_in,
        "dim_out": model.dim_out,
        "elements": [{"label": e.label, "operator": bare(e.operator)} for e in model.elements],
        "outputs": [None if r is None else bare(r) for r in model.outputs],
        "failure_element": (
            None
            if model.failure_element is None
            else {"label": model.failure_element.label, "operator": bare(model.failure_element.operator)}
        ),
    }


def model_from_dict(doc: Any) -> MeasurementModel:
    _check_schema(doc)
    if doc.get("kind") != "measurement-model":
        raise FormatError(f"expected kind 'measurement-model', got {doc.get('kind')!r}")
    try:
        elements = tuple(
            PovmElement(matrix_from_dict(e["operator"])[0], str(e["label"])) for e in doc["elements"]
        )
        outputs = tuple(None if o is None else matrix_from_dict(o)[0] for o in doc["outputs"])
        fail = doc.get("failure_element")
        failure = None if fail is None else PovmElement(matrix_from_dict(fail["operator"])[0], str(fail["label"]))
        return MeasurementModel(elements, outputs, int(doc["dim_in"]), int(doc["dim_out"]), failure)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed measurement model: {exc}") from None


_PAIR = re.compile(r"\[\s+([^\s\[\],]+),\s+([^\s\[\],]+)\s+\]")


def dumps(doc: dict) -> str:
    """Indented JSON with each ``[re, im]`` pair kept on one line."""
    text = json.dumps(doc, indent=1, allow_nan=False)
    return _PAIR.sub(r"[\1, \2]", text) + "\n"


def read_json(path: str) -> Any:
    """Load JSON from ``path``; ``-`` reads standard input."""
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None


def write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w") as fh:
            fh.write(text)


def read_matrix(path: str) -> tuple[np.ndarray, dict[str, str]]:
    return matrix_from_dict(read_json(path))


def write_matrix(path: str, m, metadata: dict[str, Any] | None = None) -> None:
    write_text(path, dumps(matrix_to_dict(m, metadata)))
