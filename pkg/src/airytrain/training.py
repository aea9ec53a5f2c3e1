"""Beam-training protocols: probe, sweep, select, and account for pilots.

A training run for the lattice and scan strategies transmits the two probe
beams first, picks the bend direction from their received energies, then
sweeps only that direction's codebook; the reported pilot overhead is
2 + (codewords swept). The grid baseline sweeps everything with no probes,
the focusing baseline is a single codeword. Codebooks depend only on the
scene geometry, never on the blockage, so one prebuilt set can serve many
blockage scenarios over the same apertures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelMatrix, LinkBudget, channel_matrix, digital_upper_bound, received_power, spectral_efficiency
from .codebooks import (
    Codebook,
    CodebookConfig,
    PolarGrid,
    fs1c_generate,
    focusing_codebook,
    hfac_generate,
    nupc_generate,
    probe_pair,
    resolve_direction,
)
from .geometry import Scene

STRATEGIES = ("focusing", "nupc", "fs1c", "hfac")

# Probe transmissions charged to strategies that use the direction decision.
PROBE_COST = 2


@dataclass(frozen=True)
class TrainingReport:
    """Outcome of one training run for one strategy on one scene."""

    strategy: str
    bend_sign: int
    powers: tuple[float, ...]
    best_index: int
    best_power: float
    best_se: float
    overhead: int
    best_meta: dict
    probe_energies: tuple[float, float] | None
    snr: float

    def to_json_dict(self) -> dict:
        out = {
            "strategy": self.strategy,
            "bend_sign": self.bend_sign,
            "best_index": self.best_index,
            "best_power": self.best_power,
            "best_se": self.best_se,
            "overhead": self.overhead,
            "overhead_includes_probes": self.probe_energies is not None,
            "num_codewords": len(self.powers),
            "snr": self.snr,
            "best": self.best_meta,
            "powers": list(self.powers),
        }
        if self.probe_energies is not None:
            out["probe_energy_up"] = self.probe_energies[0]
            out["probe_energy_down"] = self.probe_energies[1]
        return out

    def csv_row(self) -> dict:
        return {
            "strategy": self.strategy,
            "sigma": self.bend_sign,
            "se": self.best_se,
            "overhead": self.overhead,
            "best_index": self.best_index,
            "best_power": self.best_power,
        }


@dataclass(eq=False)
class CodebookSet:
    """Every codebook a scene geometry supports, built once and reused.

    Keyed by the blockage-free scene fingerprint; train() refuses to apply a
    set built for different apertures.
    """

    scene_tag: str
    probes: tuple
    nupc: dict
    fs1c: dict
    hfac: Codebook
    focusing: Codebook

    @classmethod
    def build(cls, scene: Scene, cfg: CodebookConfig | None = None) -> "CodebookSet":
        cfg = cfg or CodebookConfig()
        grid = PolarGrid.for_scene(scene, cfg.z_min, cfg.dgamma, cfg.dphi)
        return cls(
            scene_tag=scene.unblocked().fingerprint(),
            probes=probe_pair(scene, cfg.z_probe),
            nupc={
                s: nupc_generate(scene, grid, s, target_rule=cfg.target_rule)
                for s in (+1, -1)
            },
            fs1c={
                s: fs1c_generate(scene, cfg.z_scan, cfg.scan_step, s) for s in (+1, -1)
            },
            hfac=hfac_generate(
                scene,
                cfg.hfac_curvature_step,
                cfg.hfac_focal_step,
                cfg.hfac_steering_step,
                cfg.z_min,
            ),
            focusing=focusing_codebook(scene),
        )


def sweep(codebook: Codebook, h: ChannelMatrix) -> tuple[np.ndarray, int]:
    """Received power per codeword and the argmax (lowest index on ties)."""
    if len(codebook) == 0:
        raise ValueError("cannot sweep an empty codebook")
    y = h.entries @ codebook.weight_matrix()
    powers = np.sum(np.abs(y) ** 2, axis=0)
    return powers, int(np.argmax(powers))


def train(
    scene: Scene,
    strategy: str,
    budget: LinkBudget,
    cfg: CodebookConfig | None = None,
    books: CodebookSet | None = None,
    channel: ChannelMatrix | None = None,
) -> TrainingReport:
    """Run one strategy end to end on a scene and report the winner.

    The probe decision and all sweeps use the actual (possibly blocked)
    channel; a prebuilt CodebookSet and/or ChannelMatrix may be supplied to
    amortize repeated runs on the same geometry.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    if books is None:
        books = CodebookSet.build(scene, cfg)
    elif books.scene_tag != scene.unblocked().fingerprint():
        raise ValueError("codebook set was built for a different scene geometry")
    if channel is None:
        channel = channel_matrix(scene)

    probe_energies: tuple[float, float] | None = None
    bend_sign = 0
    if strategy in ("nupc", "fs1c"):
        up, down = books.probes
        e_up = received_power(channel, up)
        e_down = received_power(channel, down)
        probe_energies = (e_up, e_down)
        bend_sign = resolve_direction(e_up, e_down)
        codebook = books.nupc[bend_sign] if strategy == "nupc" else books.fs1c[bend_sign]
        overhead = PROBE_COST + len(codebook)
    elif strategy == "hfac":
        codebook = books.hfac
        overhead = len(codebook)
    else:
        codebook = books.focusing
        overhead = len(codebook)

    powers, best = sweep(codebook, channel)
    best_power = float(powers[best])
    return TrainingReport(
        strategy=strategy,
        bend_sign=bend_sign,
        powers=tuple(float(p) for p in powers),
        best_index=best,
        best_power=best_power,
        best_se=spectral_efficiency(best_power, budget),
        overhead=overhead,
        best_meta=codebook.entries[best].meta_dict(),
        probe_energies=probe_energies,
        snr=budget.snr,
    )


def compare(
    scene: Scene,
    strategies: tuple[str, ...],
    budget: LinkBudget,
    cfg: CodebookConfig | None = None,
    books: CodebookSet | None = None,
    channel: ChannelMatrix | None = None,
) -> tuple[list[TrainingReport], float]:
    """Train every requested strategy on one scene plus the digital ceiling.

    Returns the reports in request order and the upper bound for the same
    (possibly blocked) channel.
    """
    if not strategies:
        raise ValueError("strategies list may not be empty")
    if books is None:
        books = CodebookSet.build(scene, cfg)
    if channel is None:
        channel = channel_matrix(scene)
    reports = [
        train(scene, s, budget, cfg=cfg, books=books, channel=channel)
        for s in strategies
    ]
    return reports, digital_upper_bound(channel, budget)
