"""Minimum-variance beamforming for ULAs with multi-frequency distortionless constraints.

The package splits into four layers: array geometry and steering vectors
(`arrays`), wideband scenario synthesis and covariance estimation
(`scenario`), closed-form constrained solvers with an independent KKT
cross-check (`solvers`), and beam-pattern / SINR / Monte Carlo evaluation
(`patterns`). The `cli` module wraps them behind the ``wbbeam`` command.
"""

from .arrays import (
    SPEED_OF_LIGHT,
    ArrayGeometry,
    SteeringVector,
    half_wavelength_spacing,
    steering_matrix,
    steering_vector,
)
from .patterns import (
    DEFAULT_FREQ_GRID_POINTS,
    DEFAULT_THETA_GRID_POINTS,
    NORMALIZATIONS,
    SINR_FLOOR_DB,
    BeamPattern,
    ComparisonReport,
    MetricStat,
    beam_pattern,
    beam_pattern_family,
    gain_ripple_db,
    monte_carlo_compare,
    output_sinr,
    soi_gain_profile,
    solve_both,
    trial_covariance,
)
from .scenario import (
    DEFAULT_LOADING_SCALE,
    DEFAULT_NUM_SIM_FREQS,
    CovarianceMatrix,
    Scenario,
    SnapshotMatrix,
    default_loading_factor,
    generate_snapshots,
    ideal_covariance,
    reference_scenario,
    sample_covariance,
)
from .solvers import (
    ConstraintSet,
    DegenerateConstraintsError,
    NumericalRankError,
    WeightVector,
    kkt_oracle,
    mvdr_weights,
    mvmfdr_weights,
)

__version__ = "0.1.0"

__all__ = [
    "SPEED_OF_LIGHT",
    "ArrayGeometry",
    "SteeringVector",
    "steering_vector",
    "steering_matrix",
    "half_wavelength_spacing",
    "DEFAULT_LOADING_SCALE",
    "DEFAULT_NUM_SIM_FREQS",
    "Scenario",
    "SnapshotMatrix",
    "CovarianceMatrix",
    "generate_snapshots",
    "sample_covariance",
    "ideal_covariance",
    "default_loading_factor",
    "reference_scenario",
    "ConstraintSet",
    "WeightVector",
    "mvdr_weights",
    "mvmfdr_weights",
    "kkt_oracle",
    "NumericalRankError",
    "DegenerateConstraintsError",
    "NORMALIZATIONS",
    "SINR_FLOOR_DB",
    "DEFAULT_FREQ_GRID_POINTS",
    "DEFAULT_THETA_GRID_POINTS",
    "BeamPattern",
    "MetricStat",
    "ComparisonReport",
    "beam_pattern",
    "beam_pattern_family",
    "soi_gain_profile",
    "gain_ripple_db",
    "output_sinr",
    "solve_both",
    "trial_covariance",
    "monte_carlo_compare",
    "__version__",
]
