"""sweepsolve: penalized dynamics for sweeping processes with a degenerate operator.

The package freezes moving sets C(t, x) into exact geometric instances,
integrates the penalized motion -dx/dt = (A(x) - proj_{C(t,x)}(A(x)))/lambda,
cross-checks against the catching-up recursion where that oracle is valid, and
certifies the quantitative tracking bounds (tube bound, trajectory Lipschitz
constant, truncated-Hausdorff moduli, far parameter alpha) on the results.
"""

from .analysis import (
    DiagnosticsReport,
    FarParameters,
    LambdaDiagnostics,
    SamplerConfig,
    check_phi_bound,
    estimate_alpha,
    estimate_kappa,
    kappa_tilde,
    lambda_sweep,
    lipschitz_estimate,
    sup_diff,
    truncated_hausdorff,
)
from .dynamics import (
    IntegratorConfig,
    Scenario,
    Trajectory,
    catching_up,
    integrate,
    penalized_rhs,
)
from .errors import (
    DegenerateSample,
    DimensionMismatch,
    EmptyCandidates,
    EmptyInstance,
    GridMismatch,
    InvalidVector,
    ParseError,
    ProjectionNotConverged,
    StepFailure,
    SweepSolveError,
    TubeSamplingFailed,
    UnsupportedScenario,
    ValidationError,
)
from .hulls import min_norm_distance, min_norm_point
from .operators import (
    ConstantsCheck,
    IdentityOperator,
    LinearSPDOperator,
    Operator,
    ScaledIdentityOperator,
    verify_constants,
)
from .scenario_io import (
    OutputConfig,
    load_scenario,
    parse_scenario,
    read_trajectory_csv,
    validate_scenario,
    write_trajectory_csv,
)
from .set_zoo import (
    BallSpec,
    BoxSpec,
    HalfSpaceIntersectionSpec,
    HalfSpaceSpec,
    SetInstance,
    UnionSpec,
    WedgeSpec,
    distance,
    dykstra_project,
    instantiate,
    project,
    select_projection,
)

__version__ = "0.1.0"

__all__ = [
    "BallSpec", "BoxSpec", "ConstantsCheck", "DegenerateSample",
    "DiagnosticsReport", "DimensionMismatch", "EmptyCandidates",
    "EmptyInstance", "FarParameters", "GridMismatch", "HalfSpaceIntersectionSpec",
    "HalfSpaceSpec", "IdentityOperator", "IntegratorConfig", "InvalidVector",
    "LambdaDiagnostics", "LinearSPDOperator", "Operator", "OutputConfig",
    "ParseError", "ProjectionNotConverged", "SamplerConfig", "Scenario",
    "ScaledIdentityOperator", "SetInstance", "StepFailure", "SweepSolveError",
    "Trajectory", "TubeSamplingFailed", "UnionSpec", "UnsupportedScenario",
    "ValidationError", "WedgeSpec", "catching_up", "check_phi_bound",
    "distance", "dykstra_project", "estimate_alpha", "estimate_kappa",
    "instantiate", "integrate", "kappa_tilde", "lambda_sweep",
    "lipschitz_estimate", "load_scenario", "min_norm_distance",
    "min_norm_point", "parse_scenario", "penalized_rhs", "project",
    "read_trajectory_csv", "select_projection", "sup_diff",
    "truncated_hausdorff", "validate_scenario", "verify_constants",
    "write_trajectory_csv",
]
