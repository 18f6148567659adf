"""Numerical toolkit for planar singular integrals and quasiconformal maps.

Core objects: staggered-grid complex fields and dilatations (`field`),
spectral and direct singular-integral transforms (`transforms`), the
fixed-point solver for (I - mu S) with weighted-norm diagnostics
(`beltrami`), Carleson-measure and kernel-bound measurements
(`analysis`), curve tracing with chord-arc / regularity / Cauchy-operator
estimates and the closed-form scenario maps (`geometry`), and a
reproducible scenario pipeline with a CLI (`scenarios`, `cli`).
"""

from .analysis import (
    CarlesonReport,
    ball_mass,
    carleson_density,
    carleson_norm,
    dyadic_radii,
    lemma1_row_integral,
    rectifiability_energy,
)
from .beltrami import (
    NonConvergenceError,
    OperatorStats,
    SolveReport,
    default_probes,
    inverse_weighted_bound,
    neumann_solve,
    plan_for,
    solve_beltrami,
    solve_inhomogeneous,
    weighted_operator_norm,
)
from .field import (
    BeltramiCoefficient,
    ComplexField,
    Grid,
    bandlimited_noise,
    field_to_csv,
    indicator_ball,
    integrate,
    norm,
    read_field,
    write_field,
)
from .geometry import (
    BilipschitzProfile,
    ChordArcReport,
    CurveTrace,
    MapEvaluator,
    ba_extension,
    bilipschitz_profile,
    chord_arc_constant,
    chord_arc_witness_ratio,
    curve_cauchy_operator,
    fd_wirtinger,
    map_dilatation,
    prop2_map,
    regularity_check,
    trace_curve,
)
from .scenarios import (
    ConfigError,
    ScenarioConfig,
    build_scenario,
    compare_theorem1,
    run_scenario,
    validate_document,
    verify_theorem2,
)
from .transforms import (
    LineFunction,
    SpectralPlan,
    SupportViolation,
    beurling,
    beurling_adjoint,
    cauchy_at_points,
    cauchy_line_derivative,
    cauchy_line_extension,
    cauchy_plane,
    d_fd,
    dbar_fd,
    dq_kernel_transform,
    line_pv_cauchy,
    line_sample,
    plemelj_boundary,
)

__version__ = "0.1.0"

__all__ = [
    "BeltramiCoefficient",
    "BilipschitzProfile",
    "CarlesonReport",
    "ChordArcReport",
    "ComplexField",
    "ConfigError",
    "CurveTrace",
    "Grid",
    "LineFunction",
    "MapEvaluator",
    "NonConvergenceError",
    "OperatorStats",
    "ScenarioConfig",
    "SolveReport",
    "SpectralPlan",
    "SupportViolation",
    "ba_extension",
    "ball_mass",
    "bandlimited_noise",
    "beurling",
    "beurling_adjoint",
    "bilipschitz_profile",
    "build_scenario",
    "carleson_density",
    "carleson_norm",
    "cauchy_at_points",
    "cauchy_line_derivative",
    "cauchy_line_extension",
    "cauchy_plane",
    "chord_arc_constant",
    "chord_arc_witness_ratio",
    "compare_theorem1",
    "curve_cauchy_operator",
    "d_fd",
    "dbar_fd",
    "default_probes",
    "dq_kernel_transform",
    "dyadic_radii",
    "fd_wirtinger",
    "field_to_csv",
    "indicator_ball",
    "integrate",
    "inverse_weighted_bound",
    "lemma1_row_integral",
    "line_pv_cauchy",
    "line_sample",
    "map_dilatation",
    "neumann_solve",
    "norm",
    "plan_for",
    "plemelj_boundary",
    "prop2_map",
    "read_field",
    "rectifiability_energy",
    "regularity_check",
    "run_scenario",
    "solve_beltrami",
    "solve_inhomogeneous",
    "trace_curve",
    "validate_document",
    "verify_theorem2",
    "weighted_operator_norm",
    "write_field",
]
