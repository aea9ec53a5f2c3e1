"""Reproduction driver: the three experiment families plus the oracle check.

Every experiment writes delimited tables (and optional rendered figures)
into the configured output directory. Each CSV starts with a comment line
recording the config hash, the seed, and the calibrated transmit SNR, so a
file can always be traced back to the run that produced it; JSON summaries
embed the same fields. Given identical config and seed, outputs are
byte-identical across runs.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .airy import CURVATURE_FLOOR, AiryParams, Codeword, trajectory_polyline
from .channel import (
    LinkBudget,
    calibrate_snr,
    channel_matrix,
    digital_upper_bound,
    field_map,
)
from .codebooks import Codebook
from .config import ExperimentConfig
from .errors import ConfigError
from .feasibility import (
    critical_intercept,
    curvature_rate,
    solve_critical_intercept,
    waypoint_feasible,
    waypoint_feasible_by_intercept,
    waypoint_lower_bound,
    waypoint_upper_bound,
)
from .geometry import Scene, blockage_ratio, los_cross_section
from .tableio import write_table
from .training import CodebookSet, train

HEIGHT_SWEEP_STRATEGIES = ("focusing", "nupc", "fs1c", "hfac")


def _out_dir(cfg: ExperimentConfig) -> Path:
    path = Path(cfg.out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _base_meta(cfg: ExperimentConfig, budget: LinkBudget) -> dict:
    return {"config_hash": cfg.config_hash(), "seed": cfg.seed, "rho": budget.snr}


def _write_json(path: Path, payload: dict) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
        newline="\n",
    )
    return path


def _field_grid(cfg: ExperimentConfig, scene: Scene) -> tuple[np.ndarray, np.ndarray]:
    mid = 0.5 * (scene.tx.center_x + scene.rx.center_x)
    z = np.linspace(cfg.field_z_min_m, scene.rx_depth, cfg.field_rows)
    x = np.linspace(mid - cfg.field_x_halfspan_m, mid + cfg.field_x_halfspan_m, cfg.field_cols)
    return z, x


def field_rows_with_db(fmap) -> list[list]:
    """Flatten a field map into (z, x, intensity, intensity_dB) rows.

    dB values are relative to the map peak and floored at -300 dB so cells
    shadowed to exactly zero stay finite.
    """
    peak = float(np.max(fmap.intensity))
    rows = []
    for i, z in enumerate(fmap.z):
        for j, x in enumerate(fmap.x):
            inten = float(fmap.intensity[i, j])
            if peak > 0.0 and inten > 0.0:
                db = max(10.0 * math.log10(inten / peak), -300.0)
            else:
                db = -300.0
            rows.append([float(z), float(x), inten, db])
    return rows


def overlay_rows(scene: Scene, winner: Codeword, z_start: float) -> tuple[list[list], dict]:
    """Overlay polylines for one winning codeword.

    Four kinds of rows (kind, z, x): the analytic main-lobe trajectory (or
    the straight focus ray for unbent winners), the upper and lower waypoint
    boundary lines anchored at +/- 5/12 of the transmit aperture and closing
    on the winner's target, and one segment per blockage. The metadata
    echoes the geometry needed to reconstruct the boundary endpoints.
    """
    aperture = scene.tx.aperture
    waist = scene.tx.half_aperture
    crit = critical_intercept(aperture)
    z_r = scene.rx_depth
    meta = winner.meta_dict()
    x_r = meta["x_r"] if meta["x_r"] is not None else scene.rx.center_x

    rows: list[list] = []
    params: AiryParams | None = None
    if winner.design is not None:
        params = winner.design.params
    elif winner.profile is not None and abs(winner.profile[0]) >= CURVATURE_FLOOR:
        b, fl, th = winner.profile
        params = AiryParams(
            curvature=b, focal_length=fl, steering=th, bend_sign=+1 if b > 0 else -1
        )
    if params is not None:
        z, x = trajectory_polyline(params, waist, scene.wavelength, z_start, z_r, num=200)
        rows += [["trajectory", float(zi), float(xi)] for zi, xi in zip(z, x)]
    else:
        # No bend to draw: the straight ray from the aperture center to the
        # focus target (or the receiver center when even that is missing).
        tz, tx_ = (z_r, x_r) if winner.target is None else winner.target
        for zi in (z_start, tz):
            xi = scene.tx.center_x + (tx_ - scene.tx.center_x) * (zi / tz)
            rows.append(["trajectory", float(zi), float(xi)])

    rows.append(["boundary_upper", 0.0, scene.tx.center_x + crit])
    rows.append(["boundary_upper", float(z_r), float(x_r)])
    rows.append(["boundary_lower", 0.0, scene.tx.center_x - crit])
    rows.append(["boundary_lower", float(z_r), float(x_r)])
    for blk in scene.blockages:
        rows.append(["blockage", float(blk.depth), float(blk.x_lo)])
        rows.append(["blockage", float(blk.depth), float(blk.x_hi)])

    overlay_meta = {
        "tx_aperture": aperture,
        "tx_center_x": scene.tx.center_x,
        "rx_depth": z_r,
        "target_x": float(x_r),
        "critical_x": crit,
    }
    return rows, overlay_meta


def run_field_map(cfg: ExperimentConfig, render: bool = True) -> dict:
    """Train each configured strategy and dump its winner's radiated field.

    Writes one field CSV and one overlay CSV per strategy plus a summary
    JSON reporting winner powers in dB relative to the lattice ("nupc")
    winner (or the first strategy when nupc is not in the run).
    """
    cfg.validate()
    if not cfg.strategies:
        raise ConfigError("fieldmap requires a non-empty strategy list")
    out = _out_dir(cfg)
    scene = cfg.scene()
    budget = calibrate_snr(scene, cfg.target_se)
    books = CodebookSet.build(scene, cfg.codebook_config())
    h = channel_matrix(scene)
    z_grid, x_grid = _field_grid(cfg, scene)
    meta = _base_meta(cfg, budget)

    paths: dict = {}
    results: dict = {}
    for strategy in cfg.strategies:
        report = train(scene, strategy, budget, books=books, channel=h)
        winner = _winner_codeword(books, report)
        fmap = field_map(winner, scene, z_grid, x_grid)
        field_path = out / f"fieldmap_{strategy}_field.csv"
        write_table(
            field_path,
            ["z", "x", "intensity", "intensity_dB"],
            field_rows_with_db(fmap),
            meta={**meta, "strategy": strategy},
        )
        o_rows, o_meta = overlay_rows(scene, winner, cfg.field_z_min_m)
        overlay_path = out / f"fieldmap_{strategy}_overlay.csv"
        write_table(
            overlay_path,
            ["kind", "z", "x"],
            o_rows,
            meta={**meta, "strategy": strategy, **o_meta},
        )
        paths[f"{strategy}_field"] = field_path
        paths[f"{strategy}_overlay"] = overlay_path
        results[strategy] = report

    reference = "nupc" if "nupc" in results else cfg.strategies[0]
    ref_power = results[reference].best_power
    summary = {
        "experiment": "fieldmap",
        **meta,
        "reference_strategy": reference,
        "upper_bound_se": digital_upper_bound(h, budget),
        "strategies": {},
    }
    for strategy, report in results.items():
        power = report.best_power
        rel_db = (
            10.0 * math.log10(power / ref_power) if power > 0.0 and ref_power > 0.0 else None
        )
        summary["strategies"][strategy] = {
            "se": report.best_se,
            "overhead": report.overhead,
            "sigma": report.bend_sign,
            "best_power": power,
            "power_db_rel": rel_db,
            "winner": report.best_meta,
        }
    summary_path = _write_json(out / "fieldmap_summary.json", summary)
    paths["summary"] = summary_path

    if render:
        from . import figures

        for strategy in cfg.strategies:
            png = out / f"fieldmap_{strategy}.png"
            figures.render_fieldmap(
                paths[f"{strategy}_field"], paths[f"{strategy}_overlay"], png
            )
            paths[f"{strategy}_png"] = png
    return paths


def _winner_codeword(books: CodebookSet, report) -> Codeword:
    book: Codebook
    if report.strategy == "nupc":
        book = books.nupc[report.bend_sign]
    elif report.strategy == "fs1c":
        book = books.fs1c[report.bend_sign]
    elif report.strategy == "hfac":
        book = books.hfac
    else:
        book = books.focusing
    return book.entries[report.best_index]


def run_height_sweep(cfg: ExperimentConfig, render: bool = True) -> dict:
    """Spectral efficiency of every strategy as the blockage grows.

    One row per height at the configured blockage depth: the digital ceiling
    followed by SE and pilot overhead for focusing, nupc, fs1c, hfac.
    A height of zero means the blockage is absent.
    """
    cfg.validate()
    out = _out_dir(cfg)
    base = cfg.scene()
    budget = calibrate_snr(base, cfg.target_se)
    books = CodebookSet.build(base, cfg.codebook_config())

    columns = ["height_m", "se_digital"]
    columns += [f"se_{s}" for s in HEIGHT_SWEEP_STRATEGIES]
    columns += [f"overhead_{s}" for s in HEIGHT_SWEEP_STRATEGIES]
    rows = []
    for height in cfg.height_list():
        scene = base.with_blockage(
            cfg.blockage_depth_m, height, cfg.blockage_center_x_m
        )
        h = channel_matrix(scene)
        row = [float(height), digital_upper_bound(h, budget)]
        reports = [
            train(scene, s, budget, books=books, channel=h)
            for s in HEIGHT_SWEEP_STRATEGIES
        ]
        row += [r.best_se for r in reports]
        row += [r.overhead for r in reports]
        rows.append(row)

    meta = {
        **_base_meta(cfg, budget),
        "blockage_depth_m": cfg.blockage_depth_m,
        "units_height": "m",
        "units_se": "bit/s/Hz",
    }
    csv_path = write_table(out / "heights.csv", columns, rows, meta=meta)
    paths = {"heights": csv_path}
    if render:
        from . import figures

        png = out / "heights.png"
        figures.render_heights(csv_path, png)
        paths["png"] = png
    return paths


def run_monte_carlo(cfg: ExperimentConfig, render: bool = True) -> dict:
    """Random-blockage ensemble: per-scenario results plus aggregate means.

    Scenario i draws blockage depth, height, and center from its own RNG
    stream (seeded by [seed, i], so the ensemble is independent of execution
    order and stable under re-runs). The focusing baseline always runs in
    addition to the configured strategies.
    """
    cfg.validate()
    if cfg.scenarios <= 0:
        raise ConfigError("scenarios must be positive")
    out = _out_dir(cfg)
    base = cfg.scene().unblocked()
    budget = calibrate_snr(base, cfg.target_se)
    books = CodebookSet.build(base, cfg.codebook_config())
    strategies = cfg.mc_strategies()
    depth_lo, depth_hi = cfg.mc_depth_range()

    columns = ["scenario", "depth_m", "height_m", "center_x_m", "blockage_ratio", "se_digital"]
    for s in strategies:
        columns += [f"se_{s}", f"overhead_{s}", f"sigma_{s}"]

    rows = []
    sums = {s: {"se": 0.0, "overhead": 0.0} for s in strategies}
    digital_sum = 0.0
    violations = 0
    for i in range(cfg.scenarios):
        rng = np.random.default_rng([cfg.seed, i])
        depth = float(rng.uniform(depth_lo, depth_hi))
        height = float(rng.uniform(cfg.mc_height_min_m, cfg.mc_height_max_m))
        lo, hi = los_cross_section(base, depth)
        center = float(rng.uniform(lo, hi))
        scene = base.with_blockage(depth, height, center)
        ratio = blockage_ratio(scene, scene.blockages[0]) if scene.blockages else 0.0

        h = channel_matrix(scene)
        ceiling = digital_upper_bound(h, budget)
        digital_sum += ceiling
        row = [i, depth, height, center, ratio, ceiling]
        for s in strategies:
            report = train(scene, s, budget, books=books, channel=h)
            row += [report.best_se, report.overhead, report.bend_sign]
            sums[s]["se"] += report.best_se
            sums[s]["overhead"] += report.overhead
            if report.best_se > ceiling + 1e-9:
                violations += 1
        rows.append(row)

    meta = {
        **_base_meta(cfg, budget),
        "scenarios": cfg.scenarios,
        "units_se": "bit/s/Hz",
    }
    scen_path = write_table(out / "montecarlo_scenarios.csv", columns, rows, meta=meta)

    k = float(cfg.scenarios)
    agg_rows = [
        [s, sums[s]["se"] / k, sums[s]["overhead"] / k] for s in strategies
    ]
    agg_rows.append(["digital", digital_sum / k, 0.0])
    agg_meta = {**meta, "ceiling_violations": violations}
    agg_path = write_table(
        out / "montecarlo_aggregate.csv",
        ["strategy", "mean_se", "mean_overhead"],
        agg_rows,
        meta=agg_meta,
    )
    paths = {"scenarios": scen_path, "aggregate": agg_path}
    if render:
        from . import figures

        png = out / "montecarlo.png"
        figures.render_overhead(agg_path, png)
        paths["png"] = png
    return paths


def run_boundary_check(cfg: ExperimentConfig, samples: int = 1000) -> dict:
    """Feasibility oracle suite: root check plus verdict agreement.

    Bisects the aperture-edge condition and compares the root with the 5/12
    closed form, then draws random waypoints and compares the cheap linear
    feasibility verdict against the full curvature-solution intercept
    verdict, recording the agreement rate and how far from the boundary any
    disagreement sits.
    """
    cfg.validate()
    scene = cfg.scene().unblocked()
    budget = calibrate_snr(scene, cfg.target_se)
    aperture = scene.tx.aperture
    waist = scene.tx.half_aperture
    lam = scene.wavelength

    root = solve_critical_intercept(aperture, lam, waist)
    closed = critical_intercept(aperture)
    residual = (
        root
        + 1.0 / (16.0 * lam * math.pi**2 * curvature_rate(root, lam, waist))
        - 0.5 * aperture
    )

    rng = np.random.default_rng([cfg.seed, 0x0B0B])
    z_r = scene.rx_depth
    half_rx = scene.rx.half_aperture
    x_c = scene.rx.center_x
    disagreements = []
    for _ in range(samples):
        z_b = float(rng.uniform(cfg.z_min_m, z_r - 0.1))
        x_r = float(rng.uniform(x_c - half_rx, x_c + half_rx))
        sign = +1 if rng.uniform() < 0.5 else -1
        lo, hi = los_cross_section(scene, z_b)
        x_s = float(rng.uniform(lo, hi))
        linear = waypoint_feasible((z_b, x_s), (z_r, x_r), sign, aperture)
        exact = waypoint_feasible_by_intercept(
            (z_b, x_s), (z_r, x_r), sign, aperture, lam, waist
        )
        if linear != exact:
            bound = (
                waypoint_upper_bound(z_b, z_r, x_r, aperture)
                if sign == +1
                else waypoint_lower_bound(z_b, z_r, x_r, aperture)
            )
            disagreements.append(abs(x_s - bound))

    result = {
        "aperture": aperture,
        "critical_x_root": root,
        "critical_x_closed_form": closed,
        "relative_error": abs(root - closed) / closed,
        "residual": residual,
        "samples": samples,
        "disagreements": len(disagreements),
        "agreement_rate": 1.0 - len(disagreements) / samples,
        "max_disagreement_distance": max(disagreements) if disagreements else 0.0,
        "boundary_band": 0.02 * aperture,
        "seed": cfg.seed,
        "config_hash": cfg.config_hash(),
        "rho": budget.snr,
    }
    _write_json(_out_dir(cfg) / "boundary_check.json", result)
    return result
