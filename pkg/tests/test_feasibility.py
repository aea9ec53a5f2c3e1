"""Aperture feasibility: intercepts, the 5/12 critical point, waypoint bounds."""

from __future__ import annotations

import math

import numpy as np
import pytest

from airytrain import (
    DegenerateGeometryError,
    GeometricRatios,
    SolverError,
    critical_intercept,
    curvature_rate,
    receiver_intercept,
    solve_critical_intercept,
    solve_params,
    tangent_intercept,
    waypoint_feasible,
    waypoint_feasible_by_intercept,
    waypoint_lower_bound,
    waypoint_upper_bound,
)

LAM = 0.0021413747
APERTURE = 0.5471212358499999
WAIST = 0.5 * APERTURE


class TestGeometricRatios:
    def test_from_points(self):
        r = GeometricRatios.from_points((0.5, 0.114), (3.0, 0.0))
        assert r.slope_diff == pytest.approx(0.114 / 0.5)
        assert r.inv_depth_diff == pytest.approx(2.0 - 1.0 / 3.0)
        assert r.intercept_scale == pytest.approx((0.114 / 0.5) / (5.0 / 3.0))

    def test_degenerate_depths_raise(self):
        with pytest.raises(DegenerateGeometryError):
            GeometricRatios.from_points((3.0, 0.1), (3.0, 0.0))
        with pytest.raises(ValueError):
            GeometricRatios(slope_diff=1.0, inv_depth_diff=0.0)


class TestIntercepts:
    def test_tangent_intercept_vanishes_at_the_focal_depth(self):
        p = solve_params((0.5, 0.114), (3.0, 0.0), +1, WAIST, LAM)
        assert tangent_intercept(p.focal_length, p, LAM) == pytest.approx(0.0, abs=1e-15)

    def test_tangent_intercept_monotone_for_upward_bend(self):
        p = solve_params((0.5, 0.114), (3.0, 0.0), +1, WAIST, LAM)
        z = np.linspace(0.2, 3.0, 9)
        vals = [tangent_intercept(zi, p, LAM) for zi in z]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_receiver_intercept_matches_tangent_form(self):
        waypoint, target = (0.5, 0.114), (3.0, 0.0)
        p = solve_params(waypoint, target, +1, WAIST, LAM)
        via_tangent = tangent_intercept(target[0], p, LAM)
        via_anchors = receiver_intercept(waypoint, target, p.curvature, LAM)
        assert via_anchors == pytest.approx(via_tangent, rel=1e-6)

    def test_depth_must_be_positive(self):
        p = solve_params((0.5, 0.114), (3.0, 0.0), +1, WAIST, LAM)
        with pytest.raises(ValueError):
            tangent_intercept(0.0, p, LAM)


class TestCurvatureRate:
    def test_positive_everywhere(self):
        for x in (-0.5, -0.1, 0.0, 0.1, 0.5):
            assert curvature_rate(x, LAM, WAIST) > 0.0

    def test_strictly_increasing(self):
        xs = np.linspace(-0.4, 0.4, 21)
        vals = [curvature_rate(x, LAM, WAIST) for x in xs]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_zero_intercept_value(self):
        expected = math.sqrt(3.0 / (128.0 * LAM**2 * math.pi**4 * WAIST**2))
        assert curvature_rate(0.0, LAM, WAIST) == pytest.approx(expected)


class TestCriticalIntercept:
    def test_closed_form_is_five_twelfths(self):
        assert critical_intercept(APERTURE) == pytest.approx(5.0 * APERTURE / 12.0)
        assert critical_intercept(1.2) == pytest.approx(0.5)

    def test_rejects_nonpositive_aperture(self):
        with pytest.raises(ValueError):
            critical_intercept(0.0)

    def test_numeric_root_agrees_with_closed_form(self):
        root = solve_critical_intercept(APERTURE, LAM, WAIST)
        closed = critical_intercept(APERTURE)
        assert abs(root - closed) / closed < 1e-6

    def test_numeric_root_residual_is_tiny(self):
        root = solve_critical_intercept(APERTURE, LAM, WAIST)
        residual = (
            root
            + 1.0 / (16.0 * LAM * math.pi**2 * curvature_rate(root, LAM, WAIST))
            - 0.5 * APERTURE
        )
        assert abs(residual) < 1e-8

    def test_no_sign_change_raises_solver_error(self):
        # A kilometer-scale waist flattens the bracket: no root inside.
        with pytest.raises(SolverError):
            solve_critical_intercept(APERTURE, LAM, 1e3)


class TestWaypointBounds:
    def test_bounds_interpolate_between_critical_point_and_target(self):
        crit = critical_intercept(APERTURE)
        assert waypoint_upper_bound(0.0, 3.0, 0.0, APERTURE) == pytest.approx(crit)
        assert waypoint_upper_bound(3.0, 3.0, 0.07, APERTURE) == pytest.approx(0.07)
        assert waypoint_upper_bound(0.5, 3.0, 0.0, APERTURE) == pytest.approx(
            crit * 5.0 / 6.0
        )

    def test_reference_scan_top(self):
        assert waypoint_upper_bound(0.5, 3.0, 0.0, APERTURE) == pytest.approx(
            0.18997265133680552, abs=1e-15
        )

    def test_lower_bound_mirrors_upper(self):
        for z_b in (0.3, 1.0, 2.5):
            up = waypoint_upper_bound(z_b, 3.0, 0.0, APERTURE)
            lo = waypoint_lower_bound(z_b, 3.0, 0.0, APERTURE)
            assert lo == pytest.approx(-up)

    def test_offset_target_shifts_both_bounds(self):
        up = waypoint_upper_bound(1.5, 3.0, 0.1, APERTURE)
        lo = waypoint_lower_bound(1.5, 3.0, 0.1, APERTURE)
        assert up == pytest.approx(waypoint_upper_bound(1.5, 3.0, 0.0, APERTURE) + 0.05)
        assert lo == pytest.approx(waypoint_lower_bound(1.5, 3.0, 0.0, APERTURE) + 0.05)


class TestFeasibilityVerdicts:
    def test_linear_verdict_flips_across_the_bound(self):
        z_b, target = 1.5, (3.0, 0.0)
        bound = waypoint_upper_bound(z_b, 3.0, 0.0, APERTURE)
        assert waypoint_feasible((z_b, bound - 1e-6), target, +1, APERTURE)
        assert waypoint_feasible((z_b, bound), target, +1, APERTURE)
        assert not waypoint_feasible((z_b, bound + 1e-6), target, +1, APERTURE)

    def test_downward_verdict_mirrors(self):
        z_b, target = 1.5, (3.0, 0.0)
        bound = waypoint_lower_bound(z_b, 3.0, 0.0, APERTURE)
        assert waypoint_feasible((z_b, bound + 1e-6), target, -1, APERTURE)
        assert not waypoint_feasible((z_b, bound - 1e-6), target, -1, APERTURE)

    def test_bad_bend_sign_raises(self):
        with pytest.raises(ValueError):
            waypoint_feasible((1.0, 0.0), (3.0, 0.0), 0, APERTURE)

    def test_intercept_verdict_agrees_away_from_the_bound(self):
        target = (3.0, 0.0)
        for z_b, x_s, sign in [
            (1.5, 0.05, +1),
            (1.5, 0.3, +1),
            (0.8, -0.05, -1),
            (0.8, -0.4, -1),
        ]:
            linear = waypoint_feasible((z_b, x_s), target, sign, APERTURE)
            exact = waypoint_feasible_by_intercept(
                (z_b, x_s), target, sign, APERTURE, LAM, WAIST
            )
            assert linear == exact, (z_b, x_s, sign)

    def test_intercept_verdict_rejects_unreachable_steering(self):
        assert not waypoint_feasible_by_intercept(
            (0.5, 0.25), (3.0, 10.0), +1, APERTURE, LAM, WAIST
        )
