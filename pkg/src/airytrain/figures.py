"""Figure rendering for the experiment CSVs.

These renderers read the delimited outputs back (never the in-memory
objects), so anything they can draw, an external consumer of the CSV schema
can draw too. Headless backend throughout.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .tableio import column, read_table

_OVERLAY_STYLE = {
    "trajectory": dict(color="white", lw=1.4, ls="-", label="trajectory"),
    "boundary_upper": dict(color="red", lw=1.0, ls="--", label="upper boundary"),
    "boundary_lower": dict(color="orange", lw=1.0, ls="--", label="lower boundary"),
}


def render_fieldmap(field_csv, overlay_csv, out_png, floor_db: float = -60.0) -> Path:
    """Heatmap of intensity in dB (relative to peak) with overlays on top."""
    _, cols, rows = read_table(field_csv)
    z = column(cols, rows, "z")
    x = column(cols, rows, "x")
    db = column(cols, rows, "intensity_dB")
    z_vals = np.unique(z)
    x_vals = np.unique(x)
    grid = np.full((z_vals.size, x_vals.size), floor_db)
    zi = np.searchsorted(z_vals, z)
    xi = np.searchsorted(x_vals, x)
    grid[zi, xi] = np.maximum(db, floor_db)

    fig, ax = plt.subplots(figsize=(7.0, 3.6))
    im = ax.imshow(
        grid.T,
        origin="lower",
        aspect="auto",
        extent=(z_vals[0], z_vals[-1], x_vals[0], x_vals[-1]),
        cmap="inferno",
        vmin=floor_db,
        vmax=0.0,
    )
    fig.colorbar(im, ax=ax, label="intensity (dB rel. peak)")

    _, ocols, orows = read_table(overlay_csv)
    kind_idx = ocols.index("kind")
    oz = column(ocols, orows, "z")
    ox = column(ocols, orows, "x")
    kinds = [r[kind_idx] for r in orows]
    for kind, style in _OVERLAY_STYLE.items():
        mask = np.array([k == kind for k in kinds])
        if mask.any():
            ax.plot(oz[mask], ox[mask], **style)
    blk = np.array([k == "blockage" for k in kinds])
    if blk.any():
        bz, bx = oz[blk], ox[blk]
        for i in range(0, bz.size, 2):
            ax.plot(bz[i : i + 2], bx[i : i + 2], color="black", lw=5.0, solid_capstyle="butt")

    # Designed trajectories diverge far outside the sampled window near the
    # aperture; clamp the axes to the field grid so the map stays readable.
    ax.set_xlim(z_vals[0], z_vals[-1])
    ax.set_ylim(x_vals[0], x_vals[-1])
    ax.set_xlabel("z (m)")
    ax.set_ylabel("x (m)")
    ax.legend(loc="upper left", fontsize=8, framealpha=0.6)
    fig.tight_layout()
    out_png = Path(out_png)
    fig.savefig(out_png, dpi=150)
    plt.close(fig)
    return out_png


def render_heights(heights_csv, out_png) -> Path:
    """SE-versus-blockage-height lines, one per strategy plus the ceiling."""
    meta, cols, rows = read_table(heights_csv)
    height = column(cols, rows, "height_m")
    unit_h = meta.get("units_height", "m")
    unit_se = meta.get("units_se", "bit/s/Hz")

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for name in cols:
        if not name.startswith("se_"):
            continue
        se = column(cols, rows, name)
        label = name[len("se_"):]
        if label == "digital":
            ax.plot(height, se, color="black", ls="--", lw=1.2, label="digital bound")
        else:
            ax.plot(height, se, marker="o", ms=3.5, lw=1.2, label=label)
    ax.set_xlabel(f"blockage height ({unit_h})")
    ax.set_ylabel(f"spectral efficiency ({unit_se})")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    out_png = Path(out_png)
    fig.savefig(out_png, dpi=150)
    plt.close(fig)
    return out_png


def render_overhead(aggregate_csv, out_png) -> Path:
    """Mean SE against mean pilot overhead, digital ceiling as a reference."""
    meta, cols, rows = read_table(aggregate_csv)
    name_idx = cols.index("strategy")
    mean_se = column(cols, rows, "mean_se")
    mean_oh = column(cols, rows, "mean_overhead")
    unit_se = meta.get("units_se", "bit/s/Hz")

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for i, row in enumerate(rows):
        name = row[name_idx]
        if name == "digital":
            ax.axhline(mean_se[i], color="black", ls="--", lw=1.0, label="digital bound")
            continue
        ax.scatter(mean_oh[i], mean_se[i], s=45, zorder=3)
        ax.annotate(
            name,
            (mean_oh[i], mean_se[i]),
            textcoords="offset points",
            xytext=(6, 4),
            fontsize=9,
        )
    ax.set_xlabel("mean pilot overhead")
    ax.set_ylabel(f"mean spectral efficiency ({unit_se})")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    out_png = Path(out_png)
    fig.savefig(out_png, dpi=150)
    plt.close(fig)
    return out_png
