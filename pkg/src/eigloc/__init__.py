"""Guaranteed eigenvalue localization for constant and interval matrices.

Gershgorin/Ostrowski bounds with diagonal scaling, e-circle regions for
interval matrices, stability certificates for time-varying systems,
and state-feedback synthesis through elementwise-linear conditions.
"""

from .bounds import (
    BoundsReport,
    OptimizerBudget,
    all_variants,
    gershgorin_bounds,
    interval_bounds,
    optimize_scaling,
    ostrowski_bounds,
)
from .matcore import (
    IntervalMatrix,
    MatrixError,
    RealMatrix,
    Scaling,
    col_radius,
    hat_col_radius,
    hat_row_radius,
    row_radius,
    symmetrize,
)
from .oracle import ConvergenceError, Spectrum, eigenvalues, enclosure_check, max_real_part, sample_interval
from .regions import (
    DiscFamily,
    Region,
    Stadium,
    build_families,
    build_interval_families,
    contains,
    imag_bound,
    optimized_region,
    oscillation_estimate,
    real_extent,
)
from .sim import LtvRhs, Trajectory, check_envelope, integrate
from .stability import Certificate, LtvSystem, certify, decay_envelope, demidovich_sigma, network_closed_loop
from .svg import render_svg
from .synthesis import (
    SynthesisProblem,
    SynthesisResult,
    build_constant_program,
    build_vertex_program,
    extract_gain,
    synthesize,
    verify_synthesis,
)

__version__ = "0.1.0"
