"""Deterministic JSON writer: floats always carry 17 significant digits."""

from __future__ import annotations

import json
import math

import numpy as np


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def dumps17(obj, indent: int | None = 2, _level: int = 0) -> str:
    """Like ``json.dumps`` but floats use ``%.17g`` and non-finite floats become null."""
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = ":" if indent is None else ": "
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}{sep}{dumps17(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [dumps17(v, indent, _level + 1) for v in obj]
        return "[" + pad + ("," + pad).join(items) + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj) if math.isfinite(obj) else "null"
    return json.dumps(obj)
