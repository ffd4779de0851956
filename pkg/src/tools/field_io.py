"""Reading and writing grid fields, coefficient fields and coefficient series."""
import json
import logging
import os
from typing import Any, Dict, List, Tuple

import numpy as np

from src.errors import ParseError
from src.models import ASeries, Basis
from src.tools.spectral_transforms import GridField, GridSpec, SpectralField

logger = logging.getLogger(__name__)

BINARY_HEADER = np.dtype("<i8")
BINARY_VALUES = np.dtype("<c16")


def _fmt(value: float) -> str:
    return repr(float(value))


def write_grid_csv(field: GridField, path: str) -> str:
    """One line per x₁ row, each sample written as a "re,im" pair."""
    with open(path, "w", encoding="utf-8") as handle:
        for row in field.values:
            handle.write(",".join(f"{_fmt(v.real)},{_fmt(v.imag)}" for v in row))
            handle.write("\n")
    logger.debug(f"💾 wrote {field.spec.n1}x{field.spec.n2} grid CSV to {path}")
    return path


def read_grid_csv(path: str) -> GridField:
    rows: List[List[complex]] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                numbers = [float(tok) for tok in line.split(",")]
            except ValueError as e:
                raise ParseError(f"{path}:{line_no}: non-numeric entry ({e})")
            if len(numbers) % 2:
                raise ParseError(f"{path}:{line_no}: odd number of values, expected re,im pairs")
            rows.append([complex(re, im) for re, im in zip(numbers[::2], numbers[1::2])])
    if not rows:
        raise ParseError(f"{path}: empty grid file")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ParseError(f"{path}: ragged rows with widths {sorted(widths)}")
    try:
        return GridField(GridSpec(len(rows), widths.pop()), np.array(rows, dtype=complex))
    except ValueError as e:
        raise ParseError(f"{path}: {e}")


def write_grid_binary(field: GridField, path: str) -> str:
    """Little-endian int64 n1, n2 followed by interleaved float64 re/im, row-major."""
    with open(path, "wb") as handle:
        handle.write(np.array(field.spec.shape, dtype=BINARY_HEADER).tobytes())
        handle.write(np.ascontiguousarray(field.values, dtype=BINARY_VALUES).tobytes())
    return path


def read_grid_binary(path: str) -> GridField:
    with open(path, "rb") as handle:
        payload = handle.read()
    header = 2 * BINARY_HEADER.itemsize
    if len(payload) < header:
        raise ParseError(f"{path}: truncated header")
    n1, n2 = (int(v) for v in np.frombuffer(payload[:header], dtype=BINARY_HEADER))
    body = payload[header:]
    if n1 <= 0 or n2 <= 0 or len(body) != n1 * n2 * BINARY_VALUES.itemsize:
        raise ParseError(f"{path}: header {n1}x{n2} does not match {len(body)} payload bytes")
    values = np.frombuffer(body, dtype=BINARY_VALUES).reshape(n1, n2).astype(complex)
    try:
        return GridField(GridSpec(n1, n2), values)
    except ValueError as e:
        raise ParseError(f"{path}: {e}")


def read_grid(path: str) -> GridField:
    """Dispatch on extension: .csv is text, anything else the binary layout."""
    if not os.path.exists(path):
        raise ParseError(f"input file not found: {path}")
    if os.path.splitext(path)[1].lower() == ".csv":
        return read_grid_csv(path)
    return read_grid_binary(path)


def write_grid(field: GridField, path: str) -> str:
    if os.path.splitext(path)[1].lower() == ".csv":
        return write_grid_csv(field, path)
    return write_grid_binary(field, path)


def spectral_to_dict(field: SpectralField) -> Dict[str, Any]:
    K = field.trunc
    coeffs = []
    for i in range(2 * K + 1):
        for j in range(2 * K + 1):
            value = field.coeffs[i, j]
            coeffs.append({"xi1": i - K, "xi2": j - K, "re": float(value.real), "im": float(value.imag)})
    return {"K": K, "basis": field.basis.value, "coeffs": coeffs}


def spectral_from_dict(data: Dict[str, Any], source: str = "<memory>") -> SpectralField:
    """Missing lattice entries default to zero; entries outside |ξ_j| ≤ K are rejected."""
    try:
        K = int(data["K"])
        basis = Basis(data.get("basis", Basis.L.value))
        field = SpectralField.zeros(K, basis)
        for n, entry in enumerate(data.get("coeffs", [])):
            xi1, xi2 = int(entry["xi1"]), int(entry["xi2"])
            if abs(xi1) > K or abs(xi2) > K:
                raise ParseError(f"{source}: coeffs[{n}] at ({xi1},{xi2}) outside truncation K={K}")
            field.coeffs[xi1 + K, xi2 + K] = complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0)))
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"{source}: malformed SpectralField JSON ({e!r})")
    return field


def read_spectral_json(path: str) -> SpectralField:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError:
        raise ParseError(f"input file not found: {path}")
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}:{e.lineno}: {e.msg}")
    return spectral_from_dict(data, path)


def read_series_json(path: str) -> ASeries:
    """a(x₁) as {mean, modes: [{k, re, im}]}."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return ASeries.model_validate(json.load(handle))
    except FileNotFoundError:
        raise ParseError(f"input file not found: {path}")
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}:{e.lineno}: {e.msg}")
    except ValueError as e:
        raise ParseError(f"{path}: {e}")


def read_samples_csv(path: str) -> Tuple[np.ndarray, np.ndarray]:
    """Samples of a(x₁), one value per line (or "x,value" pairs); returns (x, values)."""
    xs, values = [], []
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split(",")
                try:
                    if len(parts) not in (1, 2):
                        raise ValueError("expected 1 or 2 columns")
                    numbers = [float(p) for p in parts]
                except ValueError as e:
                    if line_no == 1:
                        continue  # header row
                    raise ParseError(f"{path}:{line_no}: {e}")
                if len(numbers) == 2:
                    xs.append(numbers[0])
                values.append(numbers[-1])
    except FileNotFoundError:
        raise ParseError(f"input file not found: {path}")
    if not values:
        raise ParseError(f"{path}: no samples")
    n = len(values)
    x = np.array(xs) if xs else np.arange(n) / n
    if xs and len(xs) != n:
        raise ParseError(f"{path}: mixed 1- and 2-column rows")
    return x, np.array(values, dtype=float)
