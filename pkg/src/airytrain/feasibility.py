"""Finite-aperture realizability of curved-beam designs.

A bent main lobe is fed by rays leaving the aperture tangent to the arc; the
launch point of the ray that lands at depth z is the "tangent intercept".
Once that intercept leaves the physical aperture, the requested arc can no
longer be illuminated and the beam stops tracking its design. Working the
intercept condition through the curvature solution collapses to a scalar
equation whose root sits at 5/12 of the aperture, which in turn yields
straight-line upper and lower bounds on where a waypoint may sit for a given
target. The linear bounds are the cheap production test; the full intercept
computation is kept as the validation path.

Coordinates and conventions are those of :mod:`airytrain.airy`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import bisect

from .airy import AiryParams, solve_params
from .errors import (
    DegenerateGeometryError,
    InfeasibleDesignError,
    NearSingularError,
    SolverError,
)

# Slack for boundary comparisons: exact equality counts as feasible, and a
# sub-picometer band keeps verdicts stable under float noise.
BOUNDARY_SLACK = 1e-12

_DEPTH_TOL = 1e-12


@dataclass(frozen=True)
class GeometricRatios:
    """The two scalars the closed forms depend on, plus their ratio.

    slope_diff is x_s/z_b - x_r/z_r (dimensionless), inv_depth_diff is
    1/z_b - 1/z_r (1/m); their ratio intercept_scale (m) is the quantity the
    aperture-edge condition constrains.
    """

    slope_diff: float
    inv_depth_diff: float

    def __post_init__(self) -> None:
        if self.inv_depth_diff == 0.0:
            raise ValueError("inv_depth_diff must be nonzero (z_b != z_r)")

    @property
    def intercept_scale(self) -> float:
        return self.slope_diff / self.inv_depth_diff

    @classmethod
    def from_points(
        cls, waypoint: tuple[float, float], target: tuple[float, float]
    ) -> "GeometricRatios":
        z_b, x_s = waypoint
        z_r, x_r = target
        if z_b <= 0.0 or z_r <= 0.0:
            raise ValueError(f"depths must be positive, got z_b={z_b}, z_r={z_r}")
        if abs(z_b - z_r) <= _DEPTH_TOL * max(z_b, z_r):
            raise DegenerateGeometryError(
                f"waypoint depth {z_b} coincides with target depth {z_r}"
            )
        return cls(
            slope_diff=x_s / z_b - x_r / z_r,
            inv_depth_diff=1.0 / z_b - 1.0 / z_r,
        )


def tangent_intercept(z: float, params: AiryParams, wavelength: float) -> float:
    """Aperture-plane launch point of the ray tangent to the arc at depth z.

    (1/F - 1/z) / (8*lambda*pi^2*B^3). Increases monotonically in z for
    positive curvature, decreases for negative.
    """
    if z <= 0.0:
        raise ValueError(f"depth must be positive, got {z}")
    if abs(params.curvature) < 1e-300:
        raise NearSingularError("tangent intercept undefined for zero curvature")
    b3 = params.curvature**3
    return (1.0 / params.focal_length - 1.0 / z) / (8.0 * wavelength * math.pi**2 * b3)


def receiver_intercept(
    waypoint: tuple[float, float],
    target: tuple[float, float],
    curvature: float,
    wavelength: float,
) -> float:
    """Tangent intercept evaluated at the target depth, in anchor-point form.

    X + v/(16*lambda*pi^2*B^3) with X, v from :class:`GeometricRatios`.
    Identical to tangent_intercept(z_r) when the focal length comes from the
    same anchor pair; this form needs only the curvature.
    """
    ratios = GeometricRatios.from_points(waypoint, target)
    if abs(curvature) < 1e-300:
        raise NearSingularError("receiver intercept undefined for zero curvature")
    b3 = curvature**3
    return ratios.intercept_scale + ratios.inv_depth_diff / (
        16.0 * wavelength * math.pi**2 * b3
    )


def curvature_rate(intercept_scale: float, wavelength: float, waist: float) -> float:
    """Approximate optimal curvature cubed per unit inverse-depth difference.

    3X/(16*lambda*pi^2*w0^2) + sqrt((3X/(16*lambda*pi^2*w0^2))^2
    + 3/(128*lambda^2*pi^4*w0^2)); strictly positive and strictly increasing
    in the intercept scale X. Multiplying by v approximates the full
    curvature-cubed solution (the small constant term under the root is
    dropped relative to :func:`airytrain.airy.solve_params`).
    """
    lead = 3.0 * intercept_scale / (16.0 * wavelength * math.pi**2 * waist**2)
    return lead + math.sqrt(
        lead * lead + 3.0 / (128.0 * wavelength**2 * math.pi**4 * waist**2)
    )


def critical_intercept(aperture: float) -> float:
    """Closed-form root of the aperture-edge condition: (5/12) * aperture."""
    if not aperture > 0.0:
        raise ValueError(f"aperture must be positive, got {aperture}")
    return 5.0 * aperture / 12.0


def solve_critical_intercept(aperture: float, wavelength: float, waist: float) -> float:
    """Numeric root of X + 1/(16*lambda*pi^2*M(X)) = aperture/2 on [0, aperture/2].

    Bisection to 1e-9 m after asserting a sign change across the bracket;
    serves as the independent oracle for :func:`critical_intercept`.

    Raises:
        SolverError: the bracket shows no sign change.
    """
    if not aperture > 0.0:
        raise ValueError(f"aperture must be positive, got {aperture}")
    half = 0.5 * aperture

    def gap(x: float) -> float:
        return x + 1.0 / (16.0 * wavelength * math.pi**2 * curvature_rate(x, wavelength, waist)) - half

    lo, hi = 0.0, half
    g_lo, g_hi = gap(lo), gap(hi)
    if not g_lo * g_hi < 0.0:
        raise SolverError(
            f"no sign change on [{lo}, {hi}]: gap({lo})={g_lo}, gap({hi})={g_hi}"
        )
    return float(bisect(gap, lo, hi, xtol=1e-9))


def waypoint_upper_bound(z_b: float, z_r: float, x_r: float, aperture: float) -> float:
    """Highest feasible waypoint x at depth z_b for an upward-bending beam.

    The straight line from (0, 5*aperture/12) to (z_r, x_r):
    (5*D/12)(1 - z_b/z_r) + x_r*z_b/z_r. Valid for 0 < z_b <= z_r.
    """
    t = z_b / z_r
    return critical_intercept(aperture) * (1.0 - t) + x_r * t


def waypoint_lower_bound(z_b: float, z_r: float, x_r: float, aperture: float) -> float:
    """Mirror of :func:`waypoint_upper_bound` for downward-bending beams."""
    t = z_b / z_r
    return -critical_intercept(aperture) * (1.0 - t) + x_r * t


def waypoint_feasible(
    waypoint: tuple[float, float],
    target: tuple[float, float],
    bend_sign: int,
    aperture: float,
) -> bool:
    """Cheap linear-boundary feasibility verdict used for codebook pruning.

    Upward bends must stay at or below the upper bound, downward bends at or
    above the lower bound; equality (within BOUNDARY_SLACK) is feasible.
    """
    if bend_sign not in (+1, -1):
        raise ValueError(f"bend_sign must be +1 or -1, got {bend_sign}")
    z_b, x_s = waypoint
    z_r, x_r = target
    if bend_sign == +1:
        return x_s <= waypoint_upper_bound(z_b, z_r, x_r, aperture) + BOUNDARY_SLACK
    return x_s >= waypoint_lower_bound(z_b, z_r, x_r, aperture) - BOUNDARY_SLACK


def waypoint_feasible_by_intercept(
    waypoint: tuple[float, float],
    target: tuple[float, float],
    bend_sign: int,
    aperture: float,
    wavelength: float,
    waist: float,
) -> bool:
    """Validation-path verdict from the full curvature solution.

    Solves the exact closed form for the curvature and checks that the
    tangent intercept at the target depth stays inside the bend-side
    aperture edge: X_int(z_r) <= +aperture/2 for upward bends,
    X_int(z_r) >= -aperture/2 for downward ones. That edge is the one the
    linear bounds linearize; the opposite edge only comes into play for
    waypoints essentially at the target depth, where the bent design
    degenerates anyway. Infeasible-steering designs count as not
    realizable. Slower than :func:`waypoint_feasible` and approximately,
    not exactly, equivalent to it; kept for cross-checking.
    """
    try:
        params = solve_params(waypoint, target, bend_sign, waist, wavelength)
    except NearSingularError:
        # No expressible bend means the straight-through design: the
        # intercept collapses to the launch point, always on the aperture.
        return True
    except InfeasibleDesignError:
        return False
    x_int = receiver_intercept(waypoint, target, params.curvature, wavelength)
    if bend_sign == +1:
        return x_int <= 0.5 * aperture + BOUNDARY_SLACK
    return x_int >= -0.5 * aperture - BOUNDARY_SLACK
