"""Bit-stable CSV and manifest output.

Floats are written with 17 significant decimal digits so every value
round-trips exactly; infinities serialize as the literal ``inf``.  Files use
UTF-8 and LF line endings, which makes reruns byte-comparable.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

__all__ = ["format_cell", "export_csv", "write_manifest"]


def format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.17g}"
    return str(value)


def export_csv(headers, rows, path) -> Path:
    """Write a rectangular table; headers should carry units."""
    path = Path(path)
    width = len(headers)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(headers)
            for row in rows:
                if len(row) != width:
                    raise ValueError(
                        f"row width {len(row)} does not match header width {width}"
                    )
                writer.writerow([format_cell(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write CSV {path}: {exc}") from exc
    return path


def write_manifest(path, payload: dict) -> Path:
    """Deterministic JSON run manifest (no timestamps, sorted keys)."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2, allow_nan=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write manifest {path}: {exc}") from exc
    return path
