"""JSON and CSV output with fixed-precision floats (17 significant digits)."""

from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import asdict, is_dataclass
from pathlib import Path

import numpy as np

FLOAT_FORMAT = ".17g"


def _float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, FLOAT_FORMAT)


def plain(obj):
    """Convert numpy arrays/scalars, enums, dataclasses and tuples to JSON types."""
    if isinstance(obj, enum.Enum):
        return obj.value
    if is_dataclass(obj) and not isinstance(obj, type):
        return plain(obj.to_dict() if hasattr(obj, "to_dict") else asdict(obj))
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def _encode(obj, indent: int, level: int) -> str:
    pad, inner = " " * (indent * level), " " * (indent * (level + 1))
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _float(obj)
    if isinstance(obj, (int, str)):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + _encode(v, indent, level + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON: key order preserved, floats as %.17g."""
    return _encode(plain(obj), indent, 0) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj), encoding="utf-8")
    return path


def _cell(v):
    if isinstance(v, float) or isinstance(v, np.floating):
        return _float(float(v))
    if v is None:
        return ""
    return plain(v)


def write_csv(path, header, rows) -> Path:
    """Rows are sequences aligned with ``header`` or dicts keyed by it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            vals = [row.get(k) for k in header] if isinstance(row, dict) else row
            w.writerow([_cell(v) for v in vals])
    return path
