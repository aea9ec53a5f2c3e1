"""Render a beam intensity field map with its design overlays.

Consumes the two tables exported by the ``fieldmap`` experiment: the field
table (columns ``z, x, intensity, intensity_dB``) and the overlay table
(columns ``kind, z, x``). Draws the dB heatmap with a configurable floor,
then the designed trajectory polyline, the feasibility boundary lines, and
the blockage as a solid bar.

Standalone usage::

    python3 plot_fieldmap.py --in field.csv --overlay overlay.csv --out fig.png
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from tableio import SchemaError, floats, read_table, require_columns, strings

FIELD_COLUMNS = ("z", "x", "intensity", "intensity_dB")
OVERLAY_COLUMNS = ("kind", "z", "x")

_LINE_STYLE = {
    "trajectory": dict(color="white", lw=1.4, ls="-", label="trajectory"),
    "boundary_upper": dict(color="red", lw=1.0, ls="--", label="upper boundary"),
    "boundary_lower": dict(color="orange", lw=1.0, ls="--", label="lower boundary"),
}


def load_field(path):
    """Read and validate the field table."""
    meta, columns, rows = read_table(path)
    require_columns(columns, FIELD_COLUMNS, path)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return meta, columns, rows


def load_overlay(path):
    """Read and validate the overlay table."""
    meta, columns, rows = read_table(path)
    require_columns(columns, OVERLAY_COLUMNS, path)
    return meta, columns, rows


def build_figure(field, overlay, floor_db: float = -60.0):
    """Build the figure from already-validated tables; caller closes it."""
    _, fcols, frows = field
    z = np.asarray(floats(fcols, frows, "z"))
    x = np.asarray(floats(fcols, frows, "x"))
    db = np.asarray(floats(fcols, frows, "intensity_dB"))

    z_vals = np.unique(z)
    x_vals = np.unique(x)
    grid = np.full((z_vals.size, x_vals.size), floor_db)
    zi = np.searchsorted(z_vals, z)
    xi = np.searchsorted(x_vals, x)
    grid[zi, xi] = np.maximum(db, floor_db)

    fig, ax = plt.subplots(figsize=(7.0, 3.6))
    image = ax.imshow(
        grid.T,
        origin="lower",
        aspect="auto",
        extent=(z_vals[0], z_vals[-1], x_vals[0], x_vals[-1]),
        cmap="inferno",
        vmin=floor_db,
        vmax=0.0,
    )
    fig.colorbar(image, ax=ax, label="intensity (dB rel. peak)")

    _, ocols, orows = overlay
    oz = np.asarray(floats(ocols, orows, "z"))
    ox = np.asarray(floats(ocols, orows, "x"))
    kinds = strings(ocols, orows, "kind")
    for kind, style in _LINE_STYLE.items():
        mask = np.array([k == kind for k in kinds], dtype=bool)
        if mask.any():
            ax.plot(oz[mask], ox[mask], **style)
    blocked = np.array([k == "blockage" for k in kinds], dtype=bool)
    if blocked.any():
        bz, bx = oz[blocked], ox[blocked]
        for i in range(0, bz.size - 1, 2):
            ax.plot(bz[i : i + 2], bx[i : i + 2], color="black", lw=5.0, solid_capstyle="butt")

    # Designed trajectories diverge far outside the sampled window near the
    # aperture; clamp the axes to the field grid so the map stays readable.
    ax.set_xlim(z_vals[0], z_vals[-1])
    ax.set_ylim(x_vals[0], x_vals[-1])
    ax.set_xlabel("z (m)")
    ax.set_ylabel("x (m)")
    ax.legend(loc="upper left", fontsize=8, framealpha=0.6)
    fig.tight_layout()
    return fig


def render(in_csv, overlay_csv, out_png, floor_db: float = -60.0) -> Path:
    """Read the tables, draw the figure, and save it to ``out_png``."""
    field = load_field(in_csv)
    overlay = load_overlay(overlay_csv)
    fig = build_figure(field, overlay, floor_db=floor_db)
    out_png = Path(out_png)
    fig.savefig(out_png, dpi=150)
    plt.close(fig)
    return out_png


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--in", dest="in_csv", required=True, metavar="CSV", help="field table")
    parser.add_argument("--overlay", required=True, metavar="CSV", help="overlay table")
    parser.add_argument("--out", required=True, metavar="PNG", help="output image path")
    parser.add_argument(
        "--floor-db",
        type=float,
        default=-60.0,
        help="clip the heatmap below this dB level (default -60)",
    )
    args = parser.parse_args(argv)
    try:
        render(args.in_csv, args.overlay, args.out, floor_db=args.floor_db)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
