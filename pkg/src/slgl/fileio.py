"""File formats: spectral-data JSON, grid-function CSV, deterministic JSON text.

All floating-point output is rendered with 17 significant digits, which
round-trips binary64 exactly and makes repeated runs byte-identical.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .core import GridFunction, NormingB, SpectralData
from .errors import InvalidArgumentError

__all__ = [
    "format_float",
    "dumps_json",
    "spectral_to_dict",
    "spectral_from_dict",
    "load_spectral_json",
    "save_spectral_json",
    "load_grid_csv",
    "save_grid_csv",
]


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise InvalidArgumentError(f"non-finite value {x!r} cannot be serialized")
    return f"{float(x):.17g}"


def dumps_json(obj, indent: int = 0) -> str:
    """Serialize dicts/lists/scalars with fixed float formatting and key order."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {dumps_json(v, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.floating, np.integer)) for v in seq):
            return "[" + ", ".join(_scalar(v) for v in seq) + "]"
        items = ",\n".join(f"{pad}  {dumps_json(v, indent + 1)}" for v in seq)
        return "[\n" + items + "\n" + pad + "]"
    return _scalar(obj)


def _scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(float(v))
    return json.dumps(str(v))


def spectral_to_dict(spectral: SpectralData, b: NormingB | None = None) -> dict:
    out = {"N": spectral.N, "lambda": list(spectral.lam), "a": list(spectral.a)}
    if b is not None:
        out["b"] = list(b.b)
    return out


def spectral_from_dict(payload: dict) -> SpectralData:
    try:
        n = int(payload["N"])
        lam = np.asarray(payload["lambda"], dtype=float)
        a = np.asarray(payload["a"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"malformed spectral data payload: {exc}") from exc
    if lam.size != n or a.size != n:
        raise InvalidArgumentError(
            f"spectral data length mismatch: N={n}, len(lambda)={lam.size}, len(a)={a.size}"
        )
    return SpectralData(lam, a)


def load_spectral_json(path) -> tuple[SpectralData, NormingB | None]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidArgumentError(f"{path}: invalid JSON: {exc}") from exc
    spectral = spectral_from_dict(payload)
    b = None
    if "b" in payload:
        b_arr = np.asarray(payload["b"], dtype=float)
        if b_arr.size != spectral.N:
            raise InvalidArgumentError(f"{path}: b has length {b_arr.size}, expected {spectral.N}")
        b = NormingB(b_arr)
    return spectral, b


def save_spectral_json(path, spectral: SpectralData, b: NormingB | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_json(spectral_to_dict(spectral, b)) + "\n")


def load_grid_csv(path) -> GridFunction:
    """Read a two-column x,value CSV with a required header line."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0].lower().replace(" ", "") != "x,value":
        raise InvalidArgumentError(f"{path}: expected header line 'x,value'")
    try:
        rows = [tuple(float(tok) for tok in ln.split(",")) for ln in lines[1:]]
    except ValueError as exc:
        raise InvalidArgumentError(f"{path}: non-numeric row: {exc}") from exc
    if len(rows) < 2 or any(len(r) != 2 for r in rows):
        raise InvalidArgumentError(f"{path}: need at least two x,value rows")
    xs = np.asarray([r[0] for r in rows])
    vals = np.asarray([r[1] for r in rows])
    h = xs[1] - xs[0]
    if h <= 0 or not np.allclose(np.diff(xs), h, rtol=1e-9, atol=1e-12):
        raise InvalidArgumentError(f"{path}: abscissae must be uniformly increasing")
    return GridFunction(float(xs[0]), float(xs[-1]), vals)


def save_grid_csv(path, grid: GridFunction) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,value\n")
        for x, v in zip(grid.x, grid.values):
            fh.write(f"{format_float(x)},{format_float(v)}\n")
