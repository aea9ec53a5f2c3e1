"""Plot mean spectral efficiency against mean pilot overhead per strategy.

Consumes the Monte Carlo aggregate table (columns ``strategy, mean_se,
mean_overhead``). Each swept strategy becomes a labeled scatter point; the
``digital`` row, which pays no pilot overhead, is drawn as a horizontal
reference line marking the upper bound.

Standalone usage::

    python3 plot_overhead.py --in aggregate.csv --out fig.png
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from tableio import SchemaError, floats, read_table, require_columns, strings


def load_aggregate(path):
    """Read and validate the aggregate table."""
    meta, columns, rows = read_table(path)
    require_columns(columns, ("strategy", "mean_se", "mean_overhead"), path)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return meta, columns, rows


def build_figure(table):
    """Build the figure from an already-validated table; caller closes it."""
    meta, columns, rows = table
    names = strings(columns, rows, "strategy")
    mean_se = floats(columns, rows, "mean_se")
    mean_oh = floats(columns, rows, "mean_overhead")
    unit_se = meta.get("units_se", "bit/s/Hz")

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    labeled = False
    for name, se, oh in zip(names, mean_se, mean_oh):
        if name == "digital":
            ax.axhline(se, color="black", ls="--", lw=1.0, label="digital bound")
            labeled = True
            continue
        ax.scatter(oh, se, s=45, zorder=3)
        ax.annotate(name, (oh, se), textcoords="offset points", xytext=(6, 4), fontsize=9)
    ax.set_xlabel("mean pilot overhead")
    ax.set_ylabel(f"mean spectral efficiency ({unit_se})")
    ax.grid(True, alpha=0.3)
    if labeled:
        ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def render(in_csv, out_png) -> Path:
    """Read the table, draw the figure, and save it to ``out_png``."""
    fig = build_figure(load_aggregate(in_csv))
    out_png = Path(out_png)
    fig.savefig(out_png, dpi=150)
    plt.close(fig)
    return out_png


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--in", dest="in_csv", required=True, metavar="CSV", help="aggregate table")
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
