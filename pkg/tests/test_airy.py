"""Curved-beam synthesis: phase profiles, closed-form solver, trajectories."""

from __future__ import annotations

import math

import numpy as np
import pytest

from airytrain import (
    XI_MAIN_LOBE,
    AiryParams,
    ArrayGeometry,
    BeamDesign,
    DegenerateGeometryError,
    DesignError,
    InfeasibleDesignError,
    NearSingularError,
    airy_codeword,
    airy_phase,
    cubic_phase,
    focusing_codeword,
    imag_curvature,
    lobe_scale,
    phase_vector,
    solve_params,
    trajectory,
    trajectory_polyline,
)

LAM = 0.0021413747
WAIST = 0.27356061792499996  # half of the default transmit aperture


def reference_params(waypoint=(0.5, 0.114), target=(3.0, 0.0), bend_sign=+1):
    return solve_params(waypoint, target, bend_sign, WAIST, LAM)


class TestAiryParams:
    def test_holds_valid_values(self):
        p = AiryParams(curvature=4.0, focal_length=0.8, steering=0.1, bend_sign=+1)
        assert p.curvature == 4.0

    def test_rejects_zero_or_nonfinite_curvature(self):
        with pytest.raises(ValueError):
            AiryParams(curvature=0.0, focal_length=1.0, steering=0.0, bend_sign=+1)
        with pytest.raises(ValueError):
            AiryParams(curvature=math.inf, focal_length=1.0, steering=0.0, bend_sign=+1)

    def test_rejects_steering_outside_open_half_circle(self):
        with pytest.raises(ValueError):
            AiryParams(curvature=1.0, focal_length=1.0, steering=math.pi / 2, bend_sign=+1)

    def test_rejects_inconsistent_bend_sign(self):
        with pytest.raises(ValueError):
            AiryParams(curvature=1.0, focal_length=1.0, steering=0.0, bend_sign=-1)
        with pytest.raises(ValueError):
            AiryParams(curvature=1.0, focal_length=1.0, steering=0.0, bend_sign=0)

    def test_allows_collimated_focal_length(self):
        p = AiryParams(curvature=1.0, focal_length=math.inf, steering=0.0, bend_sign=+1)
        assert p.focal_length == math.inf


class TestBeamDesign:
    def test_orders_depths(self):
        p = AiryParams(curvature=1.0, focal_length=1.0, steering=0.0, bend_sign=+1)
        BeamDesign(waypoint=(0.5, 0.1), target=(3.0, 0.0), params=p)
        with pytest.raises(ValueError):
            BeamDesign(waypoint=(3.5, 0.1), target=(3.0, 0.0), params=p)
        with pytest.raises(ValueError):
            BeamDesign(waypoint=(0.0, 0.1), target=(3.0, 0.0), params=p)


class TestCubicPhase:
    def test_zero_at_aperture_center(self):
        assert cubic_phase(0.0, 2.0, 0.8, 0.1, LAM) == 0.0

    def test_even_part_is_the_quadratic_term(self):
        x = 0.13
        total = cubic_phase(x, 2.0, 0.8, 0.1, LAM) + cubic_phase(-x, 2.0, 0.8, 0.1, LAM)
        assert total == pytest.approx(-2.0 * math.pi / (LAM * 0.8) * x * x)

    def test_odd_part_combines_cubic_and_steering(self):
        x = 0.2
        odd = 0.5 * (cubic_phase(x, 2.0, 0.8, 0.1, LAM) - cubic_phase(-x, 2.0, 0.8, 0.1, LAM))
        expected = (2.0 * math.pi * 2.0) ** 3 / 3.0 * x**3 - (
            2.0 * math.pi / LAM
        ) * math.sin(0.1) * x
        assert odd == pytest.approx(expected)

    def test_infinite_focal_length_drops_the_quadratic(self):
        x = 0.1
        with_f = cubic_phase(x, 2.0, math.inf, 0.0, LAM)
        assert with_f == pytest.approx((2.0 * math.pi * 2.0) ** 3 / 3.0 * x**3)

    def test_zero_focal_length_is_a_domain_error(self):
        with pytest.raises(DesignError):
            cubic_phase(0.1, 2.0, 0.0, 0.0, LAM)

    def test_vectorizes_over_the_aperture(self):
        x = np.linspace(-0.2, 0.2, 11)
        phase = cubic_phase(x, 2.0, 0.8, 0.1, LAM)
        assert phase.shape == x.shape
        assert phase[5] == pytest.approx(0.0)

    def test_airy_phase_matches_raw_profile(self):
        p = reference_params()
        x = np.linspace(-0.2, 0.2, 7)
        np.testing.assert_allclose(
            airy_phase(x, p, LAM),
            cubic_phase(x, p.curvature, p.focal_length, p.steering, LAM),
        )


class TestSolveParams:
    def test_reference_design_regression(self):
        p = reference_params()
        assert p.curvature == pytest.approx(4.286892097374624, rel=1e-12)
        assert p.focal_length == pytest.approx(0.3345749258325723, rel=1e-12)
        assert p.steering == pytest.approx(-0.25820815909733535, rel=1e-12)
        assert p.bend_sign == +1

    def test_waypoint_pass_through(self):
        p = reference_params()
        assert trajectory(0.5, p, WAIST, LAM) == pytest.approx(0.114, abs=1e-12)

    def test_target_pass_through(self):
        p = reference_params()
        assert trajectory(3.0, p, WAIST, LAM) == pytest.approx(0.0, abs=1e-12)

    def test_downward_branch_gives_negative_curvature(self):
        p = solve_params((0.5, -0.114), (3.0, 0.0), -1, WAIST, LAM)
        assert p.curvature < 0.0
        assert p.bend_sign == -1
        assert trajectory(0.5, p, WAIST, LAM) == pytest.approx(-0.114, abs=1e-12)

    def test_mirror_antisymmetry(self):
        up = reference_params()
        down = solve_params((0.5, -0.114), (3.0, 0.0), -1, WAIST, LAM)
        z = np.linspace(0.2, 3.0, 17)
        np.testing.assert_allclose(
            trajectory(z, down, WAIST, LAM),
            -trajectory(z, up, WAIST, LAM),
            atol=1e-12,
        )

    def test_upward_branch_always_bends_up(self):
        # Even a waypoint below the chord solves to positive curvature.
        p = solve_params((0.5, -0.05), (3.0, 0.0), +1, WAIST, LAM)
        assert p.curvature > 0.0

    def test_degenerate_depths_raise(self):
        with pytest.raises(DegenerateGeometryError):
            solve_params((3.0, 0.1), (3.0, 0.0), +1, WAIST, LAM)

    def test_reversed_depths_raise(self):
        with pytest.raises(ValueError):
            solve_params((3.0, 0.1), (0.5, 0.0), +1, WAIST, LAM)

    def test_unreachable_target_raises(self):
        with pytest.raises(InfeasibleDesignError):
            solve_params((0.5, 0.25), (3.0, 10.0), +1, WAIST, LAM)

    def test_bad_bend_sign_raises(self):
        with pytest.raises(ValueError):
            solve_params((0.5, 0.114), (3.0, 0.0), 2, WAIST, LAM)

    def test_near_straight_design_underflows_curvature(self):
        # Waypoint on the chord a hair before the target, absurdly long
        # waist: the solved bend falls below what any profile can express.
        with pytest.raises(NearSingularError):
            solve_params((3.0 * (1.0 - 1e-10), 0.0), (3.0, 0.0), +1, 1e9, LAM)


class TestTrajectory:
    def test_vectorized_shape(self):
        p = reference_params()
        z = np.linspace(0.1, 3.0, 50)
        x = trajectory(z, p, WAIST, LAM)
        assert x.shape == z.shape

    def test_rejects_nonpositive_depth(self):
        p = reference_params()
        with pytest.raises(ValueError):
            trajectory(0.0, p, WAIST, LAM)
        with pytest.raises(ValueError):
            trajectory(np.array([1.0, -0.5]), p, WAIST, LAM)

    def test_rejects_underflowing_curvature(self):
        p = AiryParams(curvature=1e-7, focal_length=1.0, steering=0.0, bend_sign=+1)
        with pytest.raises(NearSingularError):
            trajectory(1.0, p, WAIST, LAM)

    def test_xi_shifts_the_tracked_lobe(self):
        p = reference_params()
        main = trajectory(1.0, p, WAIST, LAM)
        shifted = trajectory(1.0, p, WAIST, LAM, xi=XI_MAIN_LOBE - 1.0)
        assert shifted - main == pytest.approx(LAM * 1.0 * p.curvature)

    def test_polyline_endpoints_and_length(self):
        p = reference_params()
        z, x = trajectory_polyline(p, WAIST, LAM, 0.1, 3.0, num=64)
        assert z.shape == x.shape == (64,)
        assert z[0] == pytest.approx(0.1)
        assert z[-1] == pytest.approx(3.0)
        assert x[-1] == pytest.approx(trajectory(3.0, p, WAIST, LAM))
        with pytest.raises(ValueError):
            trajectory_polyline(p, WAIST, LAM, 2.0, 1.0)

    def test_main_lobe_constant_matches_reference_tables(self):
        assert XI_MAIN_LOBE == -1.019

    def test_imag_curvature_formula(self):
        assert imag_curvature(WAIST, LAM) == pytest.approx(
            LAM / (math.pi * WAIST**2)
        )


class TestCodewords:
    def test_phase_vector_is_unit_power(self):
        tx = ArrayGeometry(num_elements=128, spacing=0.5 * LAM)
        cw = phase_vector(reference_params(), tx, LAM)
        assert cw.num_elements == 128
        np.testing.assert_allclose(np.abs(cw.weights), 1.0 / math.sqrt(128))
        assert np.vdot(cw.weights, cw.weights).real == pytest.approx(1.0)

    def test_phase_vector_requires_aperture_on_source_plane(self):
        tx = ArrayGeometry(num_elements=8, spacing=0.001, depth_z=1.0)
        with pytest.raises(ValueError):
            phase_vector(reference_params(), tx, LAM)

    def test_focusing_codeword_conjugates_distance_phase(self):
        tx = ArrayGeometry(num_elements=16, spacing=0.01)
        target = (2.0, 0.05)
        cw = focusing_codeword(target, tx, LAM)
        x = np.linspace(-7.5, 7.5, 16) * 0.01
        r = np.hypot(2.0, 0.05 - x)
        expected = np.exp(-2j * math.pi * r / LAM) / 4.0
        np.testing.assert_allclose(cw.weights, expected)
        assert cw.kind == "focusing"
        assert cw.target == target

    def test_focusing_codeword_rejects_nonpositive_depth(self):
        tx = ArrayGeometry(num_elements=8, spacing=0.01)
        with pytest.raises(ValueError):
            focusing_codeword((0.0, 0.1), tx, LAM)

    def test_airy_codeword_records_the_design(self):
        tx = ArrayGeometry(num_elements=512, spacing=0.5 * LAM)
        cw = airy_codeword((0.5, 0.114), (3.0, 0.0), +1, tx, WAIST, LAM, kind="nupc")
        assert cw.kind == "nupc"
        assert cw.design is not None
        assert cw.design.waypoint == (0.5, 0.114)
        meta = cw.meta_dict()
        assert meta["z_b"] == 0.5
        assert meta["bend_sign"] == +1
        assert meta["curvature"] == pytest.approx(4.286892097374624)

    def test_airy_codeword_falls_back_to_focusing_when_unbendable(self):
        tx = ArrayGeometry(num_elements=8, spacing=0.001)
        cw = airy_codeword(
            (3.0 * (1.0 - 1e-10), 0.0), (3.0, 0.0), +1, tx, 1e9, LAM, kind="fs1c"
        )
        assert cw.kind == "fs1c"
        assert cw.design is None
        reference = focusing_codeword((3.0, 0.0), tx, LAM)
        np.testing.assert_allclose(cw.weights, reference.weights)

    def test_meta_dict_for_profile_codeword(self):
        from airytrain import Codeword

        cw = Codeword(weights=np.ones(4) / 2.0, kind="hfac", profile=(-2.0, 1.5, 0.01))
        meta = cw.meta_dict()
        assert meta["curvature"] == -2.0
        assert meta["bend_sign"] == -1
        assert meta["z_b"] is None


class TestLobeScale:
    def test_reference_width(self):
        p = reference_params()
        assert lobe_scale(3.0, p.curvature, LAM) == pytest.approx(
            abs(LAM * 3.0 * p.curvature)
        )

    def test_zero_curvature_rejected(self):
        with pytest.raises(NearSingularError):
            lobe_scale(3.0, 0.0, LAM)
