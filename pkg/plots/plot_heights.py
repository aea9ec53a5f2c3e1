"""Plot spectral efficiency against blockage height for every strategy.

Consumes the ``heights.csv`` table (column ``height_m``, one ``se_<name>``
column per strategy, and ``se_digital`` for the upper bound). Draws one line
per ``se_*`` column in header order, so the legend preserves the column
order; axis labels pick up the units recorded in the header metadata.

Standalone usage::

    python3 plot_heights.py --in heights.csv --out fig.png
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from tableio import SchemaError, floats, read_table, require_columns


def load_heights(path):
    """Read and validate the height-sweep table."""
    meta, columns, rows = read_table(path)
    require_columns(columns, ("height_m", "se_digital"), path)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return meta, columns, rows


def build_figure(table):
    """Build the figure from an already-validated table; caller closes it."""
    meta, columns, rows = table
    height = floats(columns, rows, "height_m")
    unit_h = meta.get("units_height", "m")
    unit_se = meta.get("units_se", "bit/s/Hz")

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for name in columns:
        if not name.startswith("se_"):
            continue
        se = floats(columns, rows, name)
        label = name[len("se_"):]
        # Markers keep single-row sweeps visible as points.
        if label == "digital":
            ax.plot(height, se, color="black", ls="--", lw=1.2, marker="s", ms=3.0, label="digital bound")
        else:
            ax.plot(height, se, marker="o", ms=3.5, lw=1.2, label=label)
    ax.set_xlabel(f"blockage height ({unit_h})")
    ax.set_ylabel(f"spectral efficiency ({unit_se})")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def render(in_csv, out_png) -> Path:
    """Read the table, draw the figure, and save it to ``out_png``."""
    fig = build_figure(load_heights(in_csv))
    out_png = Path(out_png)
    fig.savefig(out_png, dpi=150)
    plt.close(fig)
    return out_png


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--in", dest="in_csv", required=True, metavar="CSV", help="height sweep table")
    parser.add_argument("--out", required=True, metavar="PNG", help="output image path")
    args = parser.parse_args(argv)
    try:
        render(args.in_csv, args.out)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
