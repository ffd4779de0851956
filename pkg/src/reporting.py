"""Deterministic JSON / CSV emitters for reports."""
import json
import math
import os
from enum import Enum
from typing import Any, Iterable, List

import numpy as np
from pydantic import BaseModel

from src.models import ExponentCurve


def format_float(value: float) -> str:
    """17 significant digits; non-finite values as bare JSON5-style tokens."""
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    text = "%.17g" % value
    # keep floats recognisable as floats
    if all(ch not in text for ch in ".eEn"):
        text += ".0"
    return text


def _encode(value: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if isinstance(value, BaseModel):
        value = {name: getattr(value, name) for name in type(value).model_fields}
    if isinstance(value, Enum):
        value = value.value
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    if isinstance(value, (complex, np.complexfloating)):
        return _encode({"re": value.real, "im": value.imag}, indent, level)
    if isinstance(value, str):
        return _encode_string(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{_encode_string(str(k))}: {_encode(v, indent, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        seq = list(value)
        if not seq:
            return "[]"
        # short scalar rows stay on one line
        if all(not isinstance(v, (dict, list, tuple, BaseModel, np.ndarray)) for v in seq) and len(seq) <= 8:
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in seq) + "]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    raise TypeError(f"cannot encode {type(value).__name__}")


def _encode_string(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


def to_json(value: Any, indent: int = 2) -> str:
    """Byte-stable rendering: model field order, fixed float format."""
    return _encode(value, indent, 0) + "\n"


def write_json(value: Any, path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_json(value))
    return path


def curve_rows(curve: ExponentCurve) -> List[str]:
    rows = ["R,min_abs_sigma,implied_M"]
    for shell in curve.shells:
        rows.append(f"{format_float(shell.radius)},{format_float(shell.min_abs_sigma)},"
                    f"{format_float(shell.implied_exponent)}")
    return rows


def write_curve_csv(curve: ExponentCurve, path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(curve_rows(curve)) + "\n")
    return path


def summarize_checks(checks: Iterable[Any]) -> dict:
    checks = list(checks)
    failed = [c.name for c in checks if not c.passed]
    return {"total": len(checks), "passed": len(checks) - len(failed), "failed": failed}
