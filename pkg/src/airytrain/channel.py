"""Spherical-wave line-of-sight channel with hard occlusion.

Each transmit/receive element pair contributes a free-space gain
lambda/(4*pi*r) with propagation phase exp(+j 2*pi*r/lambda); a ray that
crosses any blockage contributes zero. There is no diffraction, no noise
beyond a scalar transmit SNR, and no element pattern. Receive processing is
matched combining, so received power is the squared norm of H f and the best
rank-one precoder gives the digital ceiling via the top singular value.

The +j propagation sign matches the beam-synthesis convention in
:mod:`airytrain.airy` (focusing weights carry the conjugate -j phase). All
powers, intensities, and efficiencies are invariant under flipping both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .airy import Codeword
from .geometry import Scene, element_positions

# Grid cells closer than this to a radiating element are excluded from field
# maps (the 1/r kernel is singular there).
_R_SINGULAR = 1e-9


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    """Rx-by-Tx complex gains for one scene, tagged with its fingerprint."""

    entries: np.ndarray
    scene_tag: str

    def __post_init__(self) -> None:
        e = np.asarray(self.entries, dtype=complex)
        if e.ndim != 2:
            raise ValueError("channel entries must be a 2-D matrix")
        object.__setattr__(self, "entries", e)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def max_singular_value(self) -> float:
        """Largest singular value (matched rank-one beamforming gain)."""
        if not np.any(self.entries):
            return 0.0
        return float(np.linalg.svd(self.entries, compute_uv=False)[0])


@dataclass(frozen=True)
class LinkBudget:
    """Scalar transmit SNR (linear). Calibrated, not assumed; see calibrate_snr."""

    snr: float

    def __post_init__(self) -> None:
        if not self.snr > 0.0:
            raise ValueError(f"snr must be positive, got {self.snr}")


@dataclass(frozen=True, eq=False)
class FieldMap:
    """Radiated intensity sampled on a rectangular (z, x) lattice."""

    z: np.ndarray
    x: np.ndarray
    intensity: np.ndarray

    def __post_init__(self) -> None:
        z = np.asarray(self.z, dtype=float)
        x = np.asarray(self.x, dtype=float)
        inten = np.asarray(self.intensity, dtype=float)
        if inten.shape != (z.size, x.size):
            raise ValueError(
                f"intensity shape {inten.shape} does not match grid "
                f"({z.size}, {x.size})"
            )
        if np.any(inten < 0.0):
            raise ValueError("intensity must be nonnegative")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "intensity", inten)

    def slice_at(self, z_value: float) -> tuple[float, np.ndarray]:
        """Intensity row at the grid depth nearest z_value."""
        i = int(np.argmin(np.abs(self.z - z_value)))
        return float(self.z[i]), self.intensity[i]

    def argmax_x(self, z_value: float) -> float:
        """x of the intensity peak on the slice nearest z_value."""
        _, row = self.slice_at(z_value)
        return float(self.x[int(np.argmax(row))])


def _occlusion_mask(scene: Scene, src_x: np.ndarray, dst_z: float, dst_x: np.ndarray) -> np.ndarray:
    """Boolean (dst, src) mask: True where the straight ray survives.

    Sources sit on the z = 0 plane at src_x; destinations at depth dst_z and
    transverse dst_x. Only blockages strictly between the planes matter.
    """
    clear = np.ones((dst_x.size, src_x.size), dtype=bool)
    for blk in scene.blockages:
        if not 0.0 < blk.depth < dst_z:
            continue
        t = blk.depth / dst_z
        cross = src_x[None, :] + (dst_x[:, None] - src_x[None, :]) * t
        clear &= ~((cross >= blk.x_lo) & (cross <= blk.x_hi))
    return clear


def channel_matrix(scene: Scene) -> ChannelMatrix:
    """Line-of-sight channel for the scene.

    Entry (m, n) is lambda/(4*pi*r_mn) * exp(+j 2*pi*r_mn/lambda) when the
    element-to-element ray clears every blockage, else exactly 0.
    """
    tx = element_positions(scene.tx)
    rx = element_positions(scene.rx)
    dz = rx[:, 0][:, None] - tx[:, 0][None, :]
    dx = rx[:, 1][:, None] - tx[:, 1][None, :]
    r = np.hypot(dz, dx)
    k = 2.0 * math.pi / scene.wavelength
    h = scene.wavelength / (4.0 * math.pi * r) * np.exp(1j * k * r)
    h *= _occlusion_mask(scene, tx[:, 1], scene.rx_depth, rx[:, 1])
    return ChannelMatrix(entries=h, scene_tag=scene.fingerprint())


def received_power(h: ChannelMatrix, codeword: Codeword) -> float:
    """Squared norm of H f: matched receive combining absorbs the Rx gain."""
    if h.entries.shape[1] != codeword.num_elements:
        raise ValueError(
            f"channel expects {h.entries.shape[1]} transmit weights, "
            f"codeword has {codeword.num_elements}"
        )
    y = h.entries @ codeword.weights
    return float(np.real(np.vdot(y, y)))


def spectral_efficiency(power: float, budget: LinkBudget) -> float:
    """log2(1 + snr * power), in bit/s/Hz."""
    return math.log2(1.0 + budget.snr * power)


def digital_upper_bound(h: ChannelMatrix, budget: LinkBudget) -> float:
    """Ceiling over all unit-power precoders: log2(1 + snr * sigma_max^2)."""
    s = h.max_singular_value()
    return math.log2(1.0 + budget.snr * s * s)


def calibrate_snr(scene: Scene, target_se: float) -> LinkBudget:
    """Transmit SNR that pins the blockage-free digital ceiling at target_se.

    The blockage-free variant of the given scene is used regardless of any
    obstacles present, so calibration is a property of the geometry alone:
    snr = (2^target_se - 1) / sigma_max^2.
    """
    if not target_se > 0.0:
        raise ValueError(f"target_se must be positive, got {target_se}")
    h = channel_matrix(scene.unblocked())
    s = h.max_singular_value()
    if s == 0.0:
        raise ValueError("cannot calibrate on a scene with a vanishing channel")
    return LinkBudget(snr=(2.0**target_se - 1.0) / (s * s))


def field_map(
    codeword: Codeword,
    scene: Scene,
    z_grid: np.ndarray,
    x_grid: np.ndarray,
) -> FieldMap:
    """Radiated intensity of a codeword over a (z, x) lattice.

    Huygens superposition over transmit elements with the same free-space
    kernel and occlusion rule as :func:`channel_matrix`:

        field(z, x) = sum_n w_n * lambda/(4*pi*r_n) * exp(+j 2*pi*r_n/lambda)

    restricted to rays that clear the blockages; intensity is |field|^2.
    Evaluated one z-row at a time to bound memory. Grid cells that coincide
    with an element location are excluded (intensity 0) rather than
    evaluated on the kernel singularity.
    """
    z_grid = np.asarray(z_grid, dtype=float)
    x_grid = np.asarray(x_grid, dtype=float)
    if np.any(z_grid <= 0.0) or np.any(z_grid > scene.rx_depth + 1e-12):
        raise ValueError("field grid depths must lie in (0, rx_depth]")
    if codeword.num_elements != scene.tx.num_elements:
        raise ValueError("codeword length does not match the transmit aperture")

    tx_x = element_positions(scene.tx)[:, 1]
    lam = scene.wavelength
    k = 2.0 * math.pi / lam
    dx = x_grid[:, None] - tx_x[None, :]
    intensity = np.empty((z_grid.size, x_grid.size), dtype=float)
    for i, z in enumerate(z_grid):
        r = np.hypot(z, dx)
        kernel = lam / (4.0 * math.pi * np.maximum(r, _R_SINGULAR)) * np.exp(1j * k * r)
        kernel[r < _R_SINGULAR] = 0.0
        kernel *= _occlusion_mask(scene, tx_x, z, x_grid)
        field = kernel @ codeword.weights
        intensity[i] = np.abs(field) ** 2
    return FieldMap(z=z_grid, x=x_grid, intensity=intensity)
