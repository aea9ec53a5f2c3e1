"""Curved-beam (Airy) synthesis and beam training for blocked near-field links.

The public surface re-exports the pieces most users need: scene geometry,
the closed-form beam solver, feasibility bounds, the occluded channel,
codebook generators, and the training/experiment drivers.
"""

from .airy import (
    XI_MAIN_LOBE,
    AiryParams,
    BeamDesign,
    Codeword,
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
from .channel import (
    ChannelMatrix,
    FieldMap,
    LinkBudget,
    calibrate_snr,
    channel_matrix,
    digital_upper_bound,
    field_map,
    received_power,
    spectral_efficiency,
)
from .codebooks import (
    Codebook,
    CodebookConfig,
    PolarGrid,
    ProbeResult,
    fs1c_generate,
    focusing_codebook,
    hfac_generate,
    nupc_generate,
    probe_pair,
    resolve_direction,
)
from .config import SPEED_OF_LIGHT, ExperimentConfig, load_config, parse_config_text
from .experiments import (
    field_rows_with_db,
    overlay_rows,
    run_boundary_check,
    run_field_map,
    run_height_sweep,
    run_monte_carlo,
)
from .errors import (
    AiryTrainError,
    ConfigError,
    DegenerateGeometryError,
    DesignError,
    InfeasibleDesignError,
    NearSingularError,
    SolverError,
)
from .feasibility import (
    GeometricRatios,
    critical_intercept,
    curvature_rate,
    receiver_intercept,
    solve_critical_intercept,
    tangent_intercept,
    waypoint_feasible,
    waypoint_feasible_by_intercept,
    waypoint_lower_bound,
    waypoint_upper_bound,
)
from .geometry import (
    ArrayGeometry,
    Blockage,
    Scene,
    blockage_ratio,
    element_positions,
    los_contains,
    los_cross_section,
    los_half_width,
    ray_blocked,
    ray_clear,
    segment_x_at,
)
from .tableio import column, fmt_cell, meta_line, read_table, write_table
from .training import (
    PROBE_COST,
    STRATEGIES,
    CodebookSet,
    TrainingReport,
    compare,
    sweep,
    train,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
