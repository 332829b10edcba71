"""JSON / CSV / text writers with 17-significant-digit floats."""

from __future__ import annotations

import csv
import enum
import io
import json
import math

import numpy as np

__all__ = ["to_plain", "dumps_json", "dumps_csv", "dumps_text", "fmt_float"]


def fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def to_plain(obj):
    """Convert dataclasses, enums, tuples and numpy scalars to JSON-ready values."""
    if hasattr(obj, "to_dict"):
        return to_plain(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    return obj


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, list):
        if not obj:
            return "[]"
        items = [_encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(pad + i for i in items) + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [json.dumps(k) + ": " + _encode(v, indent, level + 1) for k, v in obj.items()]
        return "{\n" + ",\n".join(pad + i for i in items) + "\n" + end + "}"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_json(obj, indent: int = 2) -> str:
    return _encode(to_plain(obj), indent, 0) + "\n"


def _flatten(d, prefix=""):
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = ";".join(fmt_float(x) if isinstance(x, float) else str(x) for x in v)
        else:
            out[key] = v
    return out


def _cell(v):
    if isinstance(v, float):
        return fmt_float(v)
    if v is None:
        return ""
    return v


def dumps_csv(obj, rows_key: str = "rows", columns=None) -> str:
    """Write ``obj[rows_key]`` as a table, or ``obj`` as key,value pairs."""
    plain = to_plain(obj)
    buf = io.StringIO()
    if isinstance(plain, dict) and isinstance(plain.get(rows_key), list):
        rows = [_flatten(r) for r in plain[rows_key]]
        cols = columns or list(dict.fromkeys(k for r in rows for k in r))
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({k: _cell(r.get(k)) for k in cols})
    else:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in _flatten(plain).items():
            w.writerow([k, _cell(v)])
    return buf.getvalue()


def dumps_text(obj) -> str:
    flat = _flatten(to_plain(obj))
    width = max((len(k) for k in flat), default=0)
    return "".join(f"{k.ljust(width)}  {_cell(v)}\n" for k, v in flat.items())
