"""Codebook construction for blockage-resilient beam training.

Four families:

* a two-beam probe pair that decides which way to bend,
* a polar-lattice codebook ("nupc"): waypoints sampled uniformly in inverse
  depth and transverse slope, pruned to the line-of-sight region and the
  aperture feasibility boundary, each with a per-waypoint target choice,
* a single-plane scan ("fs1c"): waypoints swept along one transverse line
  with targets linked through a linear map onto the receive aperture,
* a brute-force parameter grid ("hfac"): curvature, focal length and
  steering each stepped independently, no geometric pruning, used as the
  training-overhead baseline.

Level counts everywhere use inclusive sampling, floor(range/step) + 1, with
ties at borders counting as inside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .airy import Codeword, airy_codeword, cubic_phase, focusing_codeword
from .errors import DesignError, InfeasibleDesignError
from .feasibility import (
    critical_intercept,
    curvature_rate,
    waypoint_feasible,
    waypoint_lower_bound,
    waypoint_upper_bound,
)
from .geometry import Scene, element_positions, los_contains, los_cross_section
from .tableio import write_table

_DEPTH_TOL = 1e-12
_LEVEL_SLACK = 1e-9

TARGET_RULES = ("center", "edge-floor")


def _levels(span: float, step: float) -> int:
    """Inclusive level count floor(span/step)+1, border ties inside."""
    if not step > 0.0:
        raise ValueError(f"step must be positive, got {step}")
    if span < 0.0:
        raise ValueError(f"span must be nonnegative, got {span}")
    return int(math.floor(span / step + _LEVEL_SLACK)) + 1


def _coverage_count(span: float, step: float) -> int:
    """Smallest count whose inclusive grid covers the span.

    ceil(span/step)+1 up to a tie tolerance: the last sample may overshoot
    the span end by less than one step, never undershoot it.
    """
    if not step > 0.0:
        raise ValueError(f"step must be positive, got {step}")
    if span <= 0.0:
        raise ValueError(f"span must be positive, got {span}")
    return int(math.ceil(span / step - _LEVEL_SLACK)) + 1


@dataclass(frozen=True)
class CodebookConfig:
    """Generation knobs shared by the probe, lattice, scan, and grid families.

    Defaults reproduce the reference evaluation setup. target_rule picks the
    per-waypoint target selection for the lattice codebook: "center" keeps
    the target at the receiver center unless the feasibility boundary forces
    it toward the bend-side edge; "edge-floor" is a clamp variant that never
    aims below the bend-side half-aperture (kept for comparison, degenerates
    to edge-aiming on centered scenes).
    """

    dgamma: float = 0.221
    dphi: float = 0.02
    z_min: float = 0.5
    z_probe: float = 0.5
    z_scan: float = 0.5
    scan_step: float = 0.02205
    hfac_curvature_step: float = 0.25
    hfac_focal_step: float = 1.0 / 3.0
    hfac_steering_step: float = 0.0078
    target_rule: str = "center"

    def __post_init__(self) -> None:
        for name in (
            "dgamma",
            "dphi",
            "z_min",
            "z_probe",
            "z_scan",
            "scan_step",
            "hfac_curvature_step",
            "hfac_focal_step",
            "hfac_steering_step",
        ):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.target_rule not in TARGET_RULES:
            raise ValueError(
                f"target_rule must be one of {TARGET_RULES}, got {self.target_rule!r}"
            )


@dataclass(frozen=True)
class PolarGrid:
    """Uniform lattice in inverse depth (gamma = 1/z) and slope (phi = x/z).

    gamma runs from 1/z_r (the receive plane) up to 1/z_min; phi spans
    [-phi_max, +phi_max] where phi_max is the largest slope of any point in
    the line-of-sight region at the shallowest search depth.
    """

    gamma_min: float
    gamma_max: float
    phi_max: float
    dgamma: float
    dphi: float

    def __post_init__(self) -> None:
        if not 0.0 < self.gamma_min < self.gamma_max:
            raise ValueError(
                f"need 0 < gamma_min < gamma_max, got {self.gamma_min}, {self.gamma_max}"
            )
        if not self.phi_max > 0.0:
            raise ValueError(f"phi_max must be positive, got {self.phi_max}")
        if not (self.dgamma > 0.0 and self.dphi > 0.0):
            raise ValueError("dgamma and dphi must be positive")

    @property
    def depth_levels(self) -> int:
        return _levels(self.gamma_max - self.gamma_min, self.dgamma)

    @property
    def slope_levels(self) -> int:
        return _levels(2.0 * self.phi_max, self.dphi)

    @property
    def size(self) -> int:
        return self.depth_levels * self.slope_levels

    @classmethod
    def for_scene(cls, scene: Scene, z_min: float, dgamma: float, dphi: float) -> "PolarGrid":
        if not 0.0 < z_min < scene.rx_depth:
            raise ValueError(
                f"z_min must lie in (0, {scene.rx_depth}), got {z_min}"
            )
        d_t = scene.tx.aperture
        d_r = scene.rx.aperture
        phi_max = (d_r - d_t) / (2.0 * scene.rx_depth) + d_t / (2.0 * z_min)
        return cls(
            gamma_min=1.0 / scene.rx_depth,
            gamma_max=1.0 / z_min,
            phi_max=phi_max,
            dgamma=dgamma,
            dphi=dphi,
        )

    def candidates(self):
        """Yield (m, n, z_b, x_s) in row-major (m, n) order."""
        for m in range(self.depth_levels):
            z_b = 1.0 / (self.gamma_min + m * self.dgamma)
            for n in range(self.slope_levels):
                phi = -self.phi_max + n * self.dphi
                yield m, n, z_b, z_b * phi


@dataclass(frozen=True)
class ProbeResult:
    """Received energies of the up- and down-bending probes."""

    energy_up: float
    energy_down: float

    def __post_init__(self) -> None:
        if self.energy_up < 0.0 or self.energy_down < 0.0:
            raise ValueError("probe energies must be nonnegative")

    @property
    def bend_sign(self) -> int:
        return resolve_direction(self.energy_up, self.energy_down)


def resolve_direction(energy_up: float, energy_down: float) -> int:
    """Bend toward the side whose probe came back stronger; ties go up."""
    return +1 if energy_up >= energy_down else -1


@dataclass(frozen=True, eq=False)
class Codebook:
    """Ordered codeword list plus a record of how it was generated."""

    kind: str
    entries: tuple[Codeword, ...]
    info: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError(f"codebook {self.kind!r} may not be empty")

    def __len__(self) -> int:
        return len(self.entries)

    def weight_matrix(self) -> np.ndarray:
        """Stacked weights, one column per codeword (N_t, K)."""
        return np.column_stack([cw.weights for cw in self.entries])

    def write_csv(self, path, meta: dict | None = None):
        """Self-describing table (index, kind, z_b, x_s, x_r, B, F, theta, sigma)."""
        columns = ["index", "kind", "z_b", "x_s", "x_r", "B", "F", "theta", "sigma"]
        rows = []
        for i, cw in enumerate(self.entries):
            m = cw.meta_dict()
            rows.append(
                [
                    i,
                    m["kind"],
                    m["z_b"],
                    m["x_s"],
                    m["x_r"],
                    m["curvature"],
                    m["focal_length"],
                    m["steering"],
                    m["bend_sign"],
                ]
            )
        full_meta = {"codebook": self.kind, "size": len(self.entries)}
        if meta:
            full_meta.update(meta)
        return write_table(path, columns, rows, meta=full_meta)


def probe_pair(scene: Scene, z_probe: float) -> tuple[Codeword, Codeword]:
    """Up- and down-bending probes anchored on the feasibility boundaries.

    The up probe rides the upper boundary toward the top edge of the receive
    aperture, the down probe mirrors it; whichever survives the scene better
    tells the trainer which bend sign to search. At z_probe equal to the
    receive depth both boundaries collapse onto the aperture edges and the
    probes degenerate to direct edge-focusing beams.
    """
    z_r = scene.rx_depth
    if not 0.0 < z_probe <= z_r + _DEPTH_TOL:
        raise ValueError(f"z_probe must lie in (0, {z_r}], got {z_probe}")
    x_c = scene.rx.center_x
    half_rx = scene.rx.half_aperture
    top = (z_r, x_c + half_rx)
    bottom = (z_r, x_c - half_rx)
    if z_probe >= z_r - _DEPTH_TOL * z_r:
        up = replace(focusing_codeword(top, scene.tx, scene.wavelength), kind="probe")
        down = replace(focusing_codeword(bottom, scene.tx, scene.wavelength), kind="probe")
        return up, down
    aperture = scene.tx.aperture
    waist = scene.tx.half_aperture
    x_up = waypoint_upper_bound(z_probe, z_r, top[1], aperture)
    x_down = waypoint_lower_bound(z_probe, z_r, bottom[1], aperture)
    up = airy_codeword((z_probe, x_up), top, +1, scene.tx, waist, scene.wavelength, kind="probe")
    down = airy_codeword(
        (z_probe, x_down), bottom, -1, scene.tx, waist, scene.wavelength, kind="probe"
    )
    return up, down


def _select_target(
    x_bound: float, x_c: float, half_rx: float, bend_sign: int, rule: str
) -> float:
    if rule == "center":
        if bend_sign == +1:
            return min(x_c + half_rx, max(x_c, x_bound))
        return max(x_c - half_rx, min(x_c, x_bound))
    # edge-floor clamp variant
    if bend_sign == +1:
        return max(half_rx, min(x_c, x_bound))
    return min(-half_rx, max(x_c, x_bound))


def nupc_generate(
    scene: Scene,
    grid: PolarGrid,
    bend_sign: int,
    target_rule: str = "center",
) -> Codebook:
    """Polar-lattice codebook for one bend direction.

    Every lattice node maps back to a Cartesian waypoint; nodes outside the
    line-of-sight region, beyond the receive plane, or above the feasibility
    boundary (judged against the best-case bend-side edge target) are
    dropped and counted. Each survivor gets a target from the configured
    clamp rule, sitting at the receiver center unless the boundary forces it
    outward, and is synthesized through the closed-form solver. Entries keep
    lattice (m, n) order.
    """
    if bend_sign not in (+1, -1):
        raise ValueError(f"bend_sign must be +1 or -1, got {bend_sign}")
    if target_rule not in TARGET_RULES:
        raise ValueError(f"target_rule must be one of {TARGET_RULES}, got {target_rule!r}")
    z_r = scene.rx_depth
    x_c = scene.rx.center_x
    half_rx = scene.rx.half_aperture
    aperture = scene.tx.aperture
    waist = scene.tx.half_aperture
    crit = critical_intercept(aperture)
    edge = x_c + bend_sign * half_rx

    counts = {
        "raw": grid.size,
        "degenerate_depth": 0,
        "outside_los": 0,
        "outside_boundary": 0,
        "infeasible_steering": 0,
        "focusing_fallback": 0,
    }
    entries: list[Codeword] = []
    for _m, _n, z_b, x_s in grid.candidates():
        if z_b >= z_r - _DEPTH_TOL * z_r:
            counts["degenerate_depth"] += 1
            continue
        if not los_contains(scene, z_b, x_s):
            counts["outside_los"] += 1
            continue
        if not waypoint_feasible((z_b, x_s), (z_r, edge), bend_sign, aperture):
            counts["outside_boundary"] += 1
            continue
        stretch = z_r / z_b
        x_bound = stretch * x_s - bend_sign * crit * (stretch - 1.0)
        x_r = _select_target(x_bound, x_c, half_rx, bend_sign, target_rule)
        try:
            cw = airy_codeword(
                (z_b, x_s), (z_r, x_r), bend_sign, scene.tx, waist, scene.wavelength,
                kind="nupc",
            )
        except InfeasibleDesignError:
            counts["infeasible_steering"] += 1
            continue
        if cw.design is None:
            counts["focusing_fallback"] += 1
        entries.append(cw)
    counts["emitted"] = len(entries)
    if not entries:
        raise DesignError("lattice pruning removed every candidate; no codebook")
    info = {
        "sigma": bend_sign,
        "target_rule": target_rule,
        "gamma_min": grid.gamma_min,
        "gamma_max": grid.gamma_max,
        "phi_max": grid.phi_max,
        "dgamma": grid.dgamma,
        "dphi": grid.dphi,
        "depth_levels": grid.depth_levels,
        "slope_levels": grid.slope_levels,
        **counts,
    }
    return Codebook(kind="nupc", entries=tuple(entries), info=info)


def fs1c_generate(scene: Scene, z_scan: float, step: float, bend_sign: int) -> Codebook:
    """Single-plane scan codebook for one bend direction.

    All waypoints sit at depth z_scan. For an upward bend they run from the
    lower line-of-sight edge up to the feasibility bound for a
    center-targeted beam; the target slides linearly across the receive
    aperture as the waypoint climbs, hitting both edges at the scan ends.
    The downward-bend construction is the exact x-mirror. The step grid
    covers the whole range (last sample may overshoot by under one step).
    """
    if bend_sign not in (+1, -1):
        raise ValueError(f"bend_sign must be +1 or -1, got {bend_sign}")
    z_r = scene.rx_depth
    if not 0.0 < z_scan < z_r:
        raise ValueError(f"z_scan must lie in (0, {z_r}), got {z_scan}")
    x_c = scene.rx.center_x
    half_rx = scene.rx.half_aperture
    aperture = scene.tx.aperture
    waist = scene.tx.half_aperture
    los_lo, los_hi = los_cross_section(scene, z_scan)
    if bend_sign == +1:
        scan_lo = los_lo
        scan_hi = waypoint_upper_bound(z_scan, z_r, x_c, aperture)
    else:
        scan_lo = waypoint_lower_bound(z_scan, z_r, x_c, aperture)
        scan_hi = los_hi
    width = scan_hi - scan_lo
    if width <= 0.0:
        raise DesignError(
            f"empty scan range [{scan_lo}, {scan_hi}] at depth {z_scan}"
        )
    count = _coverage_count(width, step)

    entries: list[Codeword] = []
    skipped = 0
    fallbacks = 0
    for q in range(count):
        if bend_sign == +1:
            x_s = scan_lo + q * step
        else:
            x_s = scan_hi - q * step
        frac = (x_s - scan_lo) / width
        x_r = (x_c - half_rx) + 2.0 * half_rx * frac
        try:
            cw = airy_codeword(
                (z_scan, x_s), (z_r, x_r), bend_sign, scene.tx, waist, scene.wavelength,
                kind="fs1c",
            )
        except InfeasibleDesignError:
            skipped += 1
            continue
        if cw.design is None:
            fallbacks += 1
        entries.append(cw)
    if not entries:
        raise DesignError(f"no scan entry at depth {z_scan} was synthesizable")
    info = {
        "sigma": bend_sign,
        "z_scan": z_scan,
        "step": step,
        "scan_lo": scan_lo,
        "scan_hi": scan_hi,
        "count": count,
        "infeasible_steering": skipped,
        "focusing_fallback": fallbacks,
    }
    return Codebook(kind="fs1c", entries=tuple(entries), info=info)


def hfac_generate(
    scene: Scene,
    curvature_step: float,
    focal_step: float,
    steering_step: float,
    z_min: float,
) -> Codebook:
    """Exhaustive curvature/focus/steer grid, the training-overhead baseline.

    Curvature levels step through normalized fractions of a scene-scale
    maximum bend (both signs, zero included once); focal lengths step
    through normalized depths [z_min/z_r, 1] times the receive depth;
    steering steps across the angular span of the receive aperture seen from
    the transmitter. Every triple becomes a raw phase profile, no pruning.
    """
    z_r = scene.rx_depth
    if not 0.0 < z_min < z_r:
        raise ValueError(f"z_min must lie in (0, {z_r}), got {z_min}")
    aperture = scene.tx.aperture
    waist = scene.tx.half_aperture
    lam = scene.wavelength

    # Scene-scale curvature ceiling: the optimal bend for a waypoint on the
    # critical boundary at the shallowest search depth.
    v_max = 1.0 / z_min - 1.0 / z_r
    b_max = (v_max * curvature_rate(critical_intercept(aperture), lam, waist)) ** (1.0 / 3.0)
    fractions = [i * curvature_step for i in range(_levels(1.0, curvature_step))]
    curvatures = sorted({math.copysign(f, s) * b_max for f in fractions for s in (+1.0, -1.0)})

    focal_fracs = [
        z_min / z_r + j * focal_step
        for j in range(_levels(1.0 - z_min / z_r, focal_step))
    ]
    focals = [g * z_r for g in focal_fracs]

    x_c = scene.rx.center_x
    half_rx = scene.rx.half_aperture
    theta_lo = math.atan2(x_c - half_rx, z_r)
    theta_hi = math.atan2(x_c + half_rx, z_r)
    steer_count = _levels(theta_hi - theta_lo, steering_step)
    steerings = [theta_lo + i * steering_step for i in range(steer_count)]

    entries: list[Codeword] = []
    tx_x = element_positions(scene.tx)[:, 1] - scene.tx.center_x
    norm = 1.0 / math.sqrt(scene.tx.num_elements)
    for b in curvatures:
        for f_len in focals:
            for theta in steerings:
                phase = cubic_phase(tx_x, b, f_len, theta, lam)
                entries.append(
                    Codeword(
                        weights=np.exp(1j * phase) * norm,
                        kind="hfac",
                        profile=(b, f_len, theta),
                    )
                )
    info = {
        "curvature_step": curvature_step,
        "focal_step": focal_step,
        "steering_step": steering_step,
        "curvature_max": b_max,
        "curvature_levels": len(curvatures),
        "focal_levels": len(focals),
        "steering_levels": steer_count,
        "focal_min": focals[0],
        "focal_max": focals[-1],
        "theta_lo": theta_lo,
        "theta_hi": theta_hi,
        "size": len(entries),
    }
    return Codebook(kind="hfac", entries=tuple(entries), info=info)


def focusing_codebook(scene: Scene) -> Codebook:
    """Single-entry baseline: focus on the receive-aperture center."""
    target = (scene.rx_depth, scene.rx.center_x)
    cw = focusing_codeword(target, scene.tx, scene.wavelength)
    return Codebook(kind="focusing", entries=(cw,), info={"target_z": target[0], "target_x": target[1]})
