"""Curved-beam synthesis on a linear aperture.

A cubic phase term bends the radiated main lobe along a parabola-like arc,
a quadratic term refocuses it, and a linear term steers it. Given a waypoint
the beam must pass through and a target point on the receive plane, closed
forms recover the three profile coefficients; the resulting main-lobe path
is available analytically, so designs can be checked without running a field
solver.

Sign conventions. The field solver and channel model in this package
accumulate propagation phase as exp(+j 2*pi*r/lambda); codeword weights are
exp(+j*phase) with the phase profile below. Under the opposite (conjugate)
convention every intensity and received power is identical, only the sign of
stored phases flips.

Coordinates follow :mod:`airytrain.geometry`: the aperture lies on z = 0 and
the profile coordinate is measured from the aperture center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from .errors import (
    DegenerateGeometryError,
    DesignError,
    InfeasibleDesignError,
    NearSingularError,
)
from .geometry import ArrayGeometry, element_positions

# Argument of the Airy function at its first (main) intensity maximum.
# The main lobe of the synthesized beam tracks this level set.
XI_MAIN_LOBE = -1.019

# Curvature magnitudes below this are treated as "no bend": the trajectory
# closed forms divide by the curvature cubed and lose all precision.
CURVATURE_FLOOR = 1e-6

_DEPTH_TOL = 1e-12


@dataclass(frozen=True)
class AiryParams:
    """Coefficients of the cubic-quadratic-linear aperture phase profile.

    curvature is the cubic coefficient (1/m) and sets the bend direction;
    focal_length (m, may be +inf for a collimated profile) scales the
    quadratic term; steering (rad) the linear term. bend_sign duplicates
    the curvature sign as an explicit +1/-1 tag so reports stay readable.
    """

    curvature: float
    focal_length: float
    steering: float
    bend_sign: int

    def __post_init__(self) -> None:
        if not math.isfinite(self.curvature) or self.curvature == 0.0:
            raise ValueError(f"curvature must be finite and nonzero, got {self.curvature}")
        if self.focal_length == 0.0 or math.isnan(self.focal_length):
            raise ValueError(f"focal_length must be nonzero, got {self.focal_length}")
        if not abs(self.steering) < 0.5 * math.pi:
            raise ValueError(f"steering must lie in (-pi/2, pi/2), got {self.steering}")
        if self.bend_sign not in (+1, -1):
            raise ValueError(f"bend_sign must be +1 or -1, got {self.bend_sign}")
        if self.curvature * self.bend_sign <= 0.0:
            raise ValueError(
                f"curvature sign ({self.curvature}) inconsistent with bend_sign "
                f"({self.bend_sign})"
            )


@dataclass(frozen=True)
class BeamDesign:
    """A solved design: waypoint and target as (z, x) points plus the params."""

    waypoint: tuple[float, float]
    target: tuple[float, float]
    params: AiryParams

    def __post_init__(self) -> None:
        z_b = self.waypoint[0]
        z_r = self.target[0]
        if not 0.0 < z_b < z_r:
            raise ValueError(
                f"waypoint depth must satisfy 0 < z_b < z_r, got z_b={z_b}, z_r={z_r}"
            )


@dataclass(frozen=True, eq=False)
class Codeword:
    """Unit-power analog weight vector plus a record of how it was designed.

    Exactly one of the optional fields is populated depending on kind:
    ``design`` for solved curved beams (kinds "airy", "probe"), ``target``
    for point-focusing beams, ``profile`` as a raw (curvature, focal_length,
    steering) triple for grid-swept entries.
    """

    weights: np.ndarray
    kind: str
    design: BeamDesign | None = None
    target: tuple[float, float] | None = None
    profile: tuple[float, float, float] | None = None

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=complex)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("weights must be a non-empty 1-D complex vector")
        object.__setattr__(self, "weights", w)

    @property
    def num_elements(self) -> int:
        return self.weights.size

    def meta_dict(self) -> dict:
        """Flat design record for reports and delimited output.

        Missing fields are None; bend_sign is 0 for beams without a bend.
        """
        meta: dict = {
            "kind": self.kind,
            "z_b": None,
            "x_s": None,
            "z_r": None,
            "x_r": None,
            "curvature": None,
            "focal_length": None,
            "steering": None,
            "bend_sign": 0,
        }
        if self.design is not None:
            p = self.design.params
            meta.update(
                z_b=self.design.waypoint[0],
                x_s=self.design.waypoint[1],
                z_r=self.design.target[0],
                x_r=self.design.target[1],
                curvature=p.curvature,
                focal_length=p.focal_length,
                steering=p.steering,
                bend_sign=p.bend_sign,
            )
        elif self.target is not None:
            meta.update(z_r=self.target[0], x_r=self.target[1])
        elif self.profile is not None:
            b, f, th = self.profile
            meta.update(
                curvature=b,
                focal_length=f,
                steering=th,
                bend_sign=0 if b == 0.0 else (1 if b > 0.0 else -1),
            )
        return meta


def imag_curvature(waist: float, wavelength: float) -> float:
    """Imaginary part of the complexified inverse focal distance, lambda/(pi*waist^2).

    This is the Gaussian-envelope contribution that appears alongside the
    real defocus term 1/z - 1/F in the trajectory formula.
    """
    return wavelength / (math.pi * waist * waist)


def cubic_phase(
    x0,
    curvature: float,
    focal_length: float,
    steering: float,
    wavelength: float,
):
    """Raw phase profile at aperture coordinate x0 (scalar or array), in radians.

    phase = (1/3)(2*pi*curvature)^3 x0^3 - pi/(lambda*F) x0^2
            - (2*pi/lambda) sin(steering) x0

    Phases are returned unwrapped; wrapping happens only inside the complex
    exponential. focal_length may be +/-inf (quadratic term drops out);
    focal_length = 0 is a domain error.
    """
    if focal_length == 0.0:
        raise DesignError("focal length must be nonzero")
    x0 = np.asarray(x0, dtype=float)
    two_pi = 2.0 * math.pi
    cubic = (two_pi * curvature) ** 3 / 3.0 * x0**3
    quad = math.pi / (wavelength * focal_length) * x0**2
    lin = two_pi / wavelength * math.sin(steering) * x0
    out = cubic - quad - lin
    return float(out) if out.ndim == 0 else out


def airy_phase(x0, params: AiryParams, wavelength: float):
    """Phase profile of a solved parameter set at aperture coordinate x0."""
    return cubic_phase(
        x0, params.curvature, params.focal_length, params.steering, wavelength
    )


def trajectory(
    z,
    params: AiryParams,
    waist: float,
    wavelength: float,
    xi: float = XI_MAIN_LOBE,
):
    """Transverse position of the xi-level lobe at depth z (scalar or array).

    x(z) = -xi*lambda*z*B - sin(theta)*z - ((S_R^2 - S_I^2)/(16*lambda*pi^2*B^3))*z

    with S_R = 1/z - 1/F the defocus at depth z and S_I the Gaussian term
    from :func:`imag_curvature`. The default xi tracks the main lobe.
    """
    if abs(params.curvature) < CURVATURE_FLOOR:
        raise NearSingularError(
            f"curvature {params.curvature} too small for trajectory evaluation"
        )
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0.0):
        raise ValueError("trajectory depth must be strictly positive")
    b = params.curvature
    inv_f = 1.0 / params.focal_length
    s_r = 1.0 / z - inv_f
    s_i = imag_curvature(waist, wavelength)
    denom = 16.0 * wavelength * math.pi**2 * b**3
    x = -xi * wavelength * z * b - math.sin(params.steering) * z
    x = x - (s_r * s_r - s_i * s_i) / denom * z
    return float(x) if x.ndim == 0 else x


def solve_params(
    waypoint: tuple[float, float],
    target: tuple[float, float],
    bend_sign: int,
    waist: float,
    wavelength: float,
) -> AiryParams:
    """Closed-form profile coefficients for a beam through waypoint then target.

    The curvature comes from a quadratic-in-B^3 relation between the two
    anchor points (the bend_sign selects the branch, so bend_sign = +1
    always yields positive curvature), the focal length then follows from
    the receiver-plane crossing condition, and the steering angle from
    anchoring the main lobe at the waypoint. The returned parameters satisfy
    both pass-through identities of :func:`trajectory` to double precision.

    Raises:
        DegenerateGeometryError: waypoint and target depths coincide.
        NearSingularError: solved curvature magnitude below CURVATURE_FLOOR.
        InfeasibleDesignError: steering solution leaves the arcsin domain.
        ValueError: depths out of order or bend_sign not +/-1.
    """
    if bend_sign not in (+1, -1):
        raise ValueError(f"bend_sign must be +1 or -1, got {bend_sign}")
    z_b, x_s = waypoint
    z_r, x_r = target
    if z_b <= 0.0 or z_r <= 0.0:
        raise ValueError(f"depths must be positive, got z_b={z_b}, z_r={z_r}")
    if abs(z_b - z_r) <= _DEPTH_TOL * max(z_b, z_r):
        raise DegenerateGeometryError(
            f"waypoint depth {z_b} coincides with target depth {z_r}"
        )
    if z_b > z_r:
        raise ValueError(f"waypoint depth {z_b} must precede target depth {z_r}")

    pi2 = math.pi**2
    u = x_s / z_b - x_r / z_r
    v = 1.0 / z_b - 1.0 / z_r
    lead = 3.0 * u / (16.0 * wavelength * pi2 * waist**2)
    radicand = (
        lead * lead
        + 2.0 / ((2.0 * math.pi) ** 6 * waist**6)
        + 3.0 * v * v / (128.0 * wavelength**2 * math.pi**4 * waist**2)
    )
    b_cubed = lead + bend_sign * math.sqrt(radicand)
    curvature = math.copysign(abs(b_cubed) ** (1.0 / 3.0), b_cubed)
    if abs(curvature) < CURVATURE_FLOOR:
        raise NearSingularError(
            f"solved curvature {curvature} below floor {CURVATURE_FLOOR}"
        )

    inv_f = 0.5 * (1.0 / z_r + 1.0 / z_b) + 8.0 * wavelength * pi2 * (u / v) * b_cubed
    focal_length = math.inf if inv_f == 0.0 else 1.0 / inv_f

    s_i = imag_curvature(waist, wavelength)
    s_r_b = 1.0 / z_b - inv_f
    sin_theta = (
        -XI_MAIN_LOBE * wavelength * curvature
        - x_s / z_b
        - (s_r_b * s_r_b - s_i * s_i) / (16.0 * wavelength * pi2 * b_cubed)
    )
    if not abs(sin_theta) < 1.0:
        raise InfeasibleDesignError(
            f"steering sine {sin_theta} outside (-1, 1); "
            f"waypoint {waypoint} -> target {target} is not realizable"
        )
    return AiryParams(
        curvature=curvature,
        focal_length=focal_length,
        steering=math.asin(sin_theta),
        bend_sign=bend_sign,
    )


def phase_vector(
    params: AiryParams,
    tx: ArrayGeometry,
    wavelength: float,
    design: BeamDesign | None = None,
    kind: str = "airy",
) -> Codeword:
    """Codeword realizing the phase profile on the transmit aperture.

    Weight n is exp(+j*phase(x_n)) / sqrt(N) with x_n measured from the
    aperture center; total codeword power is 1.
    """
    if tx.depth_z != 0.0:
        raise ValueError("transmit aperture must sit on the z = 0 plane")
    x = element_positions(tx)[:, 1] - tx.center_x
    phase = cubic_phase(x, params.curvature, params.focal_length, params.steering, wavelength)
    weights = np.exp(1j * phase) / math.sqrt(tx.num_elements)
    return Codeword(weights=weights, kind=kind, design=design)


def focusing_codeword(
    target: tuple[float, float],
    tx: ArrayGeometry,
    wavelength: float,
    kind: str = "focusing",
) -> Codeword:
    """Spherical-phase conjugation on a point: the classic near-field precoder.

    Weight n is exp(-j 2*pi*r_n/lambda)/sqrt(N) with r_n the distance from
    element n to the target, the conjugate of the propagation phase, so all
    element contributions add in phase at the target.
    """
    if not target[0] > 0.0:
        raise ValueError(f"focus target must have depth > 0, got {target[0]}")
    pos = element_positions(tx)
    r = np.hypot(target[0] - pos[:, 0], target[1] - pos[:, 1])
    weights = np.exp(-2j * math.pi * r / wavelength) / math.sqrt(tx.num_elements)
    return Codeword(weights=weights, kind=kind, target=(float(target[0]), float(target[1])))


def airy_codeword(
    waypoint: tuple[float, float],
    target: tuple[float, float],
    bend_sign: int,
    tx: ArrayGeometry,
    waist: float,
    wavelength: float,
    kind: str = "airy",
) -> Codeword:
    """Solve and synthesize in one step, with a focusing fallback.

    Near-straight designs whose solved curvature underflows the floor are
    replaced by a plain focusing codeword at the same target (the bend those
    designs request is below anything the aperture can express). Degenerate
    and infeasible designs still raise.
    """
    try:
        params = solve_params(waypoint, target, bend_sign, waist, wavelength)
    except NearSingularError:
        return replace(focusing_codeword(target, tx, wavelength), kind=kind)
    design = BeamDesign(
        waypoint=(float(waypoint[0]), float(waypoint[1])),
        target=(float(target[0]), float(target[1])),
        params=params,
    )
    return phase_vector(params, tx, wavelength, design=design, kind=kind)


def lobe_scale(z: float, curvature: float, wavelength: float) -> float:
    """Transverse size of one Airy-argument unit at depth z (m).

    The synthesized pattern at depth z is a function of x / (lambda*z*|B|)
    up to a shift, so this is the natural "one main-lobe width" yardstick
    when checking whether a peak landed where the trajectory says.
    """
    if curvature == 0.0:
        raise NearSingularError("lobe scale undefined for zero curvature")
    return abs(wavelength * z * curvature)


def trajectory_polyline(
    params: AiryParams,
    waist: float,
    wavelength: float,
    z_lo: float,
    z_hi: float,
    num: int = 200,
) -> tuple[np.ndarray, np.ndarray]:
    """Sampled main-lobe path for overlays: (z, x) arrays of length num."""
    if not 0.0 < z_lo < z_hi:
        raise ValueError(f"need 0 < z_lo < z_hi, got {z_lo}, {z_hi}")
    z = np.linspace(z_lo, z_hi, num)
    return z, trajectory(z, params, waist, wavelength)
