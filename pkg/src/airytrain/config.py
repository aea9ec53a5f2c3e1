"""Experiment configuration: one flat key=value schema for everything.

Defaults reproduce the reference evaluation setup (140 GHz, 512/256-element
half-wavelength arrays three meters apart, centered blockage). Unknown keys
in a config file are hard errors so a typo in a physics parameter cannot
pass silently. All lengths are meters; see README for the full schema.
"""

from __future__ import annotations

import dataclasses
import hashlib
from dataclasses import dataclass
from pathlib import Path

from .codebooks import TARGET_RULES, CodebookConfig
from .errors import ConfigError
from .geometry import ArrayGeometry, Scene
from .training import STRATEGIES

SPEED_OF_LIGHT = 299792458.0

_CANONICAL_ORDER = ("focusing", "nupc", "fs1c", "hfac")


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"expected a number, got {text!r}") from exc


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"expected an integer, got {text!r}") from exc


def _parse_str(text: str) -> str:
    return text


def _parse_strategies(text: str) -> tuple[str, ...]:
    items = tuple(s.strip() for s in text.split(",") if s.strip())
    return items


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(_parse_float(s) for s in text.split(",") if s.strip())


# key -> (attribute, parser); attribute None marks derived-only keys.
_SCHEMA = {
    "frequency_hz": _parse_float,
    "tx_elements": _parse_int,
    "rx_elements": _parse_int,
    "spacing_m": _parse_float,
    "tx_center_x_m": _parse_float,
    "rx_center_x_m": _parse_float,
    "rx_depth_m": _parse_float,
    "blockage_depth_m": _parse_float,
    "blockage_height_m": _parse_float,
    "blockage_center_x_m": _parse_float,
    "dgamma": _parse_float,
    "dphi": _parse_float,
    "z_min_m": _parse_float,
    "z_probe_m": _parse_float,
    "z_scan_m": _parse_float,
    "scan_step_m": _parse_float,
    "hfac_curvature_step": _parse_float,
    "hfac_focal_step": _parse_float,
    "hfac_steering_step": _parse_float,
    "target_rule": _parse_str,
    "target_se": _parse_float,
    "strategies": _parse_strategies,
    "seed": _parse_int,
    "scenarios": _parse_int,
    "mc_depth_min_m": _parse_float,
    "mc_depth_max_m": _parse_float,
    "mc_height_min_m": _parse_float,
    "mc_height_max_m": _parse_float,
    "heights_m": _parse_floats,
    "height_min_m": _parse_float,
    "height_max_m": _parse_float,
    "height_step_m": _parse_float,
    "field_z_min_m": _parse_float,
    "field_x_halfspan_m": _parse_float,
    "field_rows": _parse_int,
    "field_cols": _parse_int,
    "out_dir": _parse_str,
}


@dataclass(frozen=True)
class ExperimentConfig:
    frequency_hz: float = 140e9
    tx_elements: int = 512
    rx_elements: int = 256
    spacing_m: float | None = None  # None: half wavelength
    tx_center_x_m: float = 0.0
    rx_center_x_m: float = 0.0
    rx_depth_m: float = 3.0
    blockage_depth_m: float = 1.5
    blockage_height_m: float = 0.135
    blockage_center_x_m: float = 0.0
    dgamma: float = 0.221
    dphi: float = 0.02
    z_min_m: float = 0.5
    z_probe_m: float = 0.5
    z_scan_m: float = 0.5
    scan_step_m: float = 0.02205
    hfac_curvature_step: float = 0.25
    hfac_focal_step: float = 1.0 / 3.0
    hfac_steering_step: float = 0.0078
    target_rule: str = "center"
    target_se: float = 15.5
    strategies: tuple[str, ...] = ("nupc", "fs1c", "hfac")
    seed: int = 0
    scenarios: int = 200
    mc_depth_min_m: float | None = None  # None: z_min_m
    mc_depth_max_m: float | None = None  # None: rx_depth_m - 0.5
    mc_height_min_m: float = 0.05
    mc_height_max_m: float = 0.15
    heights_m: tuple[float, ...] | None = None  # None: ramp below
    height_min_m: float = 0.0
    height_max_m: float = 0.15
    height_step_m: float = 0.005
    field_z_min_m: float = 0.05
    field_x_halfspan_m: float = 0.3
    field_rows: int = 300
    field_cols: int = 200
    out_dir: str = "out"

    # -- derived quantities ------------------------------------------------

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.frequency_hz

    @property
    def spacing(self) -> float:
        return self.spacing_m if self.spacing_m is not None else 0.5 * self.wavelength

    def scene(self) -> Scene:
        """The configured scene, blockage included (if its height is positive)."""
        base = Scene(
            wavelength=self.wavelength,
            tx=ArrayGeometry(self.tx_elements, self.spacing, self.tx_center_x_m, 0.0),
            rx=ArrayGeometry(
                self.rx_elements, self.spacing, self.rx_center_x_m, self.rx_depth_m
            ),
        )
        return base.with_blockage(
            self.blockage_depth_m, self.blockage_height_m, self.blockage_center_x_m
        )

    def codebook_config(self) -> CodebookConfig:
        return CodebookConfig(
            dgamma=self.dgamma,
            dphi=self.dphi,
            z_min=self.z_min_m,
            z_probe=self.z_probe_m,
            z_scan=self.z_scan_m,
            scan_step=self.scan_step_m,
            hfac_curvature_step=self.hfac_curvature_step,
            hfac_focal_step=self.hfac_focal_step,
            hfac_steering_step=self.hfac_steering_step,
            target_rule=self.target_rule,
        )

    def mc_depth_range(self) -> tuple[float, float]:
        lo = self.mc_depth_min_m if self.mc_depth_min_m is not None else self.z_min_m
        hi = (
            self.mc_depth_max_m
            if self.mc_depth_max_m is not None
            else self.rx_depth_m - 0.5
        )
        return lo, hi

    def height_list(self) -> tuple[float, ...]:
        if self.heights_m is not None:
            return self.heights_m
        n = int(round((self.height_max_m - self.height_min_m) / self.height_step_m)) + 1
        return tuple(self.height_min_m + i * self.height_step_m for i in range(n))

    def mc_strategies(self) -> tuple[str, ...]:
        """Monte Carlo strategy set: the configured list plus the focusing
        baseline, in canonical order (focusing, nupc, fs1c, hfac)."""
        chosen = set(self.strategies) | {"focusing"}
        return tuple(s for s in _CANONICAL_ORDER if s in chosen)

    # -- validation and identity -------------------------------------------

    def validate(self) -> "ExperimentConfig":
        def need(cond: bool, msg: str) -> None:
            if not cond:
                raise ConfigError(msg)

        need(self.frequency_hz > 0, "frequency_hz must be positive")
        need(self.tx_elements >= 1, "tx_elements must be >= 1")
        need(self.rx_elements >= 1, "rx_elements must be >= 1")
        need(self.spacing > 0, "spacing_m must be positive")
        need(self.rx_depth_m > 0, "rx_depth_m must be positive")
        need(
            0 < self.blockage_depth_m < self.rx_depth_m,
            "blockage_depth_m must lie strictly between the arrays",
        )
        need(self.blockage_height_m >= 0, "blockage_height_m must be nonnegative")
        for name in ("z_min_m", "z_probe_m", "z_scan_m"):
            v = getattr(self, name)
            need(0 < v < self.rx_depth_m, f"{name} must lie in (0, rx_depth_m)")
        for name in (
            "dgamma",
            "dphi",
            "scan_step_m",
            "hfac_curvature_step",
            "hfac_focal_step",
            "hfac_steering_step",
            "height_step_m",
        ):
            need(getattr(self, name) > 0, f"{name} must be positive")
        need(
            self.target_rule in TARGET_RULES,
            f"target_rule must be one of {TARGET_RULES}",
        )
        need(self.target_se > 0, "target_se must be positive")
        need(len(self.strategies) > 0, "strategies may not be empty")
        for s in self.strategies:
            need(s in STRATEGIES, f"unknown strategy {s!r}; expected one of {STRATEGIES}")
        need(self.scenarios >= 1, "scenarios must be >= 1")
        lo, hi = self.mc_depth_range()
        need(
            0 < lo < hi < self.rx_depth_m,
            "Monte Carlo depth range must satisfy 0 < min < max < rx_depth_m",
        )
        need(
            0 <= self.mc_height_min_m <= self.mc_height_max_m,
            "Monte Carlo height range must satisfy 0 <= min <= max",
        )
        for h in self.height_list():
            need(h >= 0, "heights must be nonnegative")
        need(self.height_min_m <= self.height_max_m, "height_min_m must be <= height_max_m")
        need(
            0 < self.field_z_min_m < self.rx_depth_m,
            "field_z_min_m must lie in (0, rx_depth_m)",
        )
        need(self.field_x_halfspan_m > 0, "field_x_halfspan_m must be positive")
        need(self.field_rows >= 2 and self.field_cols >= 2, "field grid needs >= 2 points per axis")
        return self

    def canonical_items(self) -> list[tuple[str, str]]:
        """Effective configuration as sorted (key, text) pairs.

        Optional fields appear with their resolved values so two configs
        that behave identically hash identically.
        """
        resolved = {
            "spacing_m": self.spacing,
            "mc_depth_min_m": self.mc_depth_range()[0],
            "mc_depth_max_m": self.mc_depth_range()[1],
            "heights_m": ",".join(repr(h) for h in self.height_list()),
            "strategies": ",".join(self.strategies),
        }
        items = []
        for f in dataclasses.fields(self):
            if f.name == "out_dir":
                continue  # where files land does not change what they contain
            if f.name in resolved:
                value = resolved[f.name]
            else:
                value = getattr(self, f.name)
            if isinstance(value, float):
                value = repr(value)
            items.append((f.name, str(value)))
        return sorted(items)

    def config_hash(self) -> str:
        text = "\n".join(f"{k}={v}" for k, v in self.canonical_items())
        return hashlib.sha256(text.encode()).hexdigest()[:12]

    def with_overrides(self, **kwargs) -> "ExperimentConfig":
        return dataclasses.replace(self, **kwargs).validate()


def parse_config_text(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Parse 'key = value' lines into a config; unknown keys are errors."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"line {lineno}: unknown configuration key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate configuration key {key!r}")
        try:
            values[key] = _SCHEMA[key](value)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {key}: {exc}") from exc
    base = base or ExperimentConfig()
    return dataclasses.replace(base, **values).validate()


def load_config(path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    return parse_config_text(p.read_text(encoding="utf-8"), base=base)
