"""Tiny delimited-table writer/reader used by every CSV surface.

One format everywhere: an optional single comment line ("# key=value ..."),
a header row naming columns, then comma-separated data rows. Floats are
rendered with repr (shortest round-trip form), so identical inputs produce
byte-identical files; empty cells mean "not applicable".
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def fmt_cell(value) -> str:
    """Canonical text form of one cell; None becomes the empty cell."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def meta_line(meta: dict) -> str:
    """Comment line recording run metadata; values must not contain spaces."""
    parts = []
    for key, value in meta.items():
        text = fmt_cell(value)
        if " " in text or "," in text:
            raise ValueError(f"metadata value for {key!r} may not contain spaces/commas")
        parts.append(f"{key}={text}")
    return "# " + " ".join(parts)


def write_table(path, columns: list[str], rows, meta: dict | None = None) -> Path:
    """Write the table; rows are sequences aligned with columns."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    if meta:
        lines.append(meta_line(meta))
    lines.append(",".join(columns))
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"row width {len(row)} != column count {len(columns)}")
        lines.append(",".join(fmt_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def read_table(path) -> tuple[dict, list[str], list[list[str]]]:
    """Read a table back as (meta, columns, raw string rows)."""
    meta: dict = {}
    columns: list[str] = []
    rows: list[list[str]] = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            for chunk in line.lstrip("#").split():
                if "=" in chunk:
                    key, _, value = chunk.partition("=")
                    meta[key] = value
            continue
        if not columns:
            columns = line.split(",")
            continue
        rows.append(line.split(","))
    return meta, columns, rows


def column(columns: list[str], rows: list[list[str]], name: str) -> np.ndarray:
    """Float array for one named column; empty cells become NaN."""
    if name not in columns:
        raise KeyError(f"missing column {name!r}")
    i = columns.index(name)
    return np.array([float(r[i]) if r[i] != "" else np.nan for r in rows])
