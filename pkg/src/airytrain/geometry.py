"""Planar scene geometry: linear apertures, line-of-sight region, blockages.

Everything lives in a two-dimensional (z, x) plane. z is the propagation
axis, with the transmit aperture on the plane z = 0 and the receive aperture
at depth z = rx.depth_z. x is the transverse axis. Apertures are uniform
linear arrays along x; blockages are fully opaque transverse intervals at a
fixed depth. A ray between two points either clears every blockage or is
absorbed, there is no diffraction model.

All quantities are SI (meters, radians).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

import numpy as np

_EPS = 1e-12


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear aperture along x at a fixed depth.

    Element n (0-based) sits at x = center_x + (n - (num_elements - 1)/2) *
    spacing, so the aperture is symmetric about ``center_x`` regardless of
    parity.
    """

    num_elements: int
    spacing: float
    center_x: float = 0.0
    depth_z: float = 0.0

    def __post_init__(self) -> None:
        if self.num_elements < 1:
            raise ValueError(f"num_elements must be >= 1, got {self.num_elements}")
        if not self.spacing > 0.0:
            raise ValueError(f"spacing must be > 0, got {self.spacing}")
        if self.depth_z < 0.0:
            raise ValueError(f"depth_z must be >= 0, got {self.depth_z}")

    @property
    def aperture(self) -> float:
        """Physical span (num_elements - 1) * spacing in meters."""
        return (self.num_elements - 1) * self.spacing

    @property
    def half_aperture(self) -> float:
        return 0.5 * self.aperture


def element_positions(geom: ArrayGeometry) -> np.ndarray:
    """Element coordinates as an (N, 2) array of (z, x) rows.

    The mapping is exact for N = 1 (a single point at the array center) and
    symmetric for any N: positions for center_x = 0 are the negation of the
    reversed array.
    """
    idx = np.arange(geom.num_elements, dtype=float)
    x = geom.center_x + (idx - (geom.num_elements - 1) / 2.0) * geom.spacing
    z = np.full_like(x, geom.depth_z)
    return np.column_stack([z, x])


@dataclass(frozen=True)
class Blockage:
    """Opaque interval [x_lo, x_hi] at depth z = depth."""

    depth: float
    x_lo: float
    x_hi: float

    def __post_init__(self) -> None:
        if not self.depth > 0.0:
            raise ValueError(f"blockage depth must be > 0, got {self.depth}")
        if not self.x_lo < self.x_hi:
            raise ValueError(
                f"blockage interval must have x_lo < x_hi, got [{self.x_lo}, {self.x_hi}]"
            )

    @property
    def height(self) -> float:
        return self.x_hi - self.x_lo

    @property
    def center(self) -> float:
        return 0.5 * (self.x_lo + self.x_hi)


@dataclass(frozen=True)
class Scene:
    """Transmit aperture at z = 0, receive aperture at z > 0, blockages between.

    The scene is immutable; derived scenes (unblocked copy, mirrored copy)
    are produced as new objects so cached per-scene artifacts stay valid.
    """

    wavelength: float
    tx: ArrayGeometry
    rx: ArrayGeometry
    blockages: tuple[Blockage, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not self.wavelength > 0.0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")
        if self.tx.depth_z != 0.0:
            raise ValueError("transmit aperture must sit on the z = 0 plane")
        if not self.rx.depth_z > 0.0:
            raise ValueError("receive aperture must sit at depth z > 0")
        for b in self.blockages:
            if not (0.0 < b.depth < self.rx.depth_z):
                raise ValueError(
                    f"blockage depth {b.depth} outside the open interval "
                    f"(0, {self.rx.depth_z})"
                )

    @property
    def rx_depth(self) -> float:
        return self.rx.depth_z

    def unblocked(self) -> "Scene":
        """Copy of the scene with every blockage removed."""
        return replace(self, blockages=())

    def with_blockage(self, depth: float, height: float, center_x: float = 0.0) -> "Scene":
        """Copy of the scene with a single centered-interval blockage.

        A non-positive height means "no obstruction" and yields an unblocked
        scene rather than a degenerate interval.
        """
        if height <= 0.0:
            return self.unblocked()
        half = 0.5 * height
        blk = Blockage(depth=depth, x_lo=center_x - half, x_hi=center_x + half)
        return replace(self, blockages=(blk,))

    def mirrored(self) -> "Scene":
        """Scene reflected about the propagation axis (x -> -x)."""
        tx = replace(self.tx, center_x=-self.tx.center_x)
        rx = replace(self.rx, center_x=-self.rx.center_x)
        blks = tuple(
            Blockage(depth=b.depth, x_lo=-b.x_hi, x_hi=-b.x_lo) for b in self.blockages
        )
        return Scene(wavelength=self.wavelength, tx=tx, rx=rx, blockages=blks)

    def fingerprint(self) -> str:
        """Short stable hash of the scene definition, for cache keys and file tags."""

        def canon(value: float) -> str:
            # Adding zero collapses -0.0 onto 0.0 so mirrored centered scenes
            # hash identically.
            return repr(value + 0.0)

        parts = [
            canon(self.wavelength),
            f"{self.tx.num_elements},{canon(self.tx.spacing)},{canon(self.tx.center_x)},{canon(self.tx.depth_z)}",
            f"{self.rx.num_elements},{canon(self.rx.spacing)},{canon(self.rx.center_x)},{canon(self.rx.depth_z)}",
        ]
        for b in self.blockages:
            parts.append(f"{canon(b.depth)},{canon(b.x_lo)},{canon(b.x_hi)}")
        digest = hashlib.sha256("|".join(parts).encode()).hexdigest()
        return digest[:12]


def los_cross_section(scene: Scene, z: float) -> tuple[float, float]:
    """Transverse extent [x_lo, x_hi] of the Tx-to-Rx line-of-sight region at depth z.

    The region is the convex hull of both aperture end points, so its
    cross-section interpolates linearly between the transmit edges at z = 0
    and the receive edges at z = rx_depth. Outside [0, rx_depth] there is no
    region and a ValueError is raised.
    """
    zr = scene.rx_depth
    if z < -_EPS or z > zr + _EPS:
        raise ValueError(f"depth {z} outside the scene interval [0, {zr}]")
    t = min(max(z / zr, 0.0), 1.0)
    tx_lo = scene.tx.center_x - scene.tx.half_aperture
    tx_hi = scene.tx.center_x + scene.tx.half_aperture
    rx_lo = scene.rx.center_x - scene.rx.half_aperture
    rx_hi = scene.rx.center_x + scene.rx.half_aperture
    lo = tx_lo + (rx_lo - tx_lo) * t
    hi = tx_hi + (rx_hi - tx_hi) * t
    return lo, hi


def los_half_width(scene: Scene, z: float) -> float:
    """Half of the line-of-sight cross-section width at depth z."""
    lo, hi = los_cross_section(scene, z)
    return 0.5 * (hi - lo)


def los_contains(scene: Scene, z: float, x: float, slack: float = _EPS) -> bool:
    """True when (z, x) lies inside the line-of-sight region (borders count)."""
    if z < -slack or z > scene.rx_depth + slack:
        return False
    lo, hi = los_cross_section(scene, min(max(z, 0.0), scene.rx_depth))
    return lo - slack <= x <= hi + slack


def segment_x_at(p0: tuple[float, float], p1: tuple[float, float], z: float) -> float:
    """Transverse coordinate where the straight segment p0 -> p1 crosses depth z.

    Points are (z, x) pairs with distinct depths.
    """
    z0, x0 = p0
    z1, x1 = p1
    if z0 == z1:
        raise ValueError("segment endpoints must have distinct depths")
    t = (z - z0) / (z1 - z0)
    return x0 + (x1 - x0) * t


def ray_blocked(blockage: Blockage, p0: tuple[float, float], p1: tuple[float, float]) -> bool:
    """True when the open segment p0 -> p1 hits the opaque interval.

    Only blockage depths strictly between the endpoint depths can obstruct;
    grazing the interval end points counts as blocked (the obstacle is
    closed, the ray path is open).
    """
    z0, z1 = p0[0], p1[0]
    lo_z, hi_z = (z0, z1) if z0 <= z1 else (z1, z0)
    if not (lo_z < blockage.depth < hi_z):
        return False
    x = segment_x_at(p0, p1, blockage.depth)
    return blockage.x_lo <= x <= blockage.x_hi


def ray_clear(scene: Scene, p0: tuple[float, float], p1: tuple[float, float]) -> bool:
    """True when the segment p0 -> p1 clears every blockage in the scene."""
    return not any(ray_blocked(b, p0, p1) for b in scene.blockages)


def blockage_ratio(scene: Scene, blockage: Blockage) -> float:
    """Blockage height relative to the line-of-sight half-width at its depth.

    Defined as height / half-width, clipped to 1; an obstacle taller than
    the half cross-section saturates. For the usual axis-centered obstacle
    this measures how far it reaches toward the region edge.
    """
    half = los_half_width(scene, blockage.depth)
    if half <= 0.0:
        return 1.0
    return min(blockage.height / half, 1.0)
