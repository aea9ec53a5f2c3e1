"""Reader for the delimited tables that the airytrain CLI exports.

The scripts in this directory are deliberately standalone: they parse the
documented table format themselves instead of importing the simulation
library, so they work against any file that honors the contract:

* an optional first line ``# key=value key=value ...`` carrying file-level
  metadata (values contain no spaces),
* a header row naming the columns,
* comma-separated data rows.
"""

from __future__ import annotations

import csv
from pathlib import Path


class SchemaError(ValueError):
    """The input file does not match the documented schema for the figure."""


def read_table(path):
    """Read one table file into ``(meta, columns, rows)``.

    ``meta`` is a dict of the ``key=value`` pairs from the comment line (empty
    when the line is absent), ``columns`` the header names, and ``rows`` the
    data rows as lists of strings.
    """
    path = Path(path)
    meta = {}
    with path.open(newline="") as handle:
        first = handle.readline()
        if first.startswith("#"):
            for token in first[1:].split():
                key, _, value = token.partition("=")
                meta[key] = value
        else:
            handle.seek(0)
        reader = csv.reader(handle)
        try:
            columns = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: missing header row") from None
        rows = [row for row in reader if row]
    return meta, columns, rows


def require_columns(columns, names, path) -> None:
    """Raise :class:`SchemaError` naming the first missing column."""
    for name in names:
        if name not in columns:
            raise SchemaError(f"{path}: missing required column '{name}'")


def floats(columns, rows, name):
    """One named column as a list of floats."""
    index = columns.index(name)
    return [float(row[index]) for row in rows]


def strings(columns, rows, name):
    """One named column as a list of strings."""
    index = columns.index(name)
    return [row[index] for row in rows]
