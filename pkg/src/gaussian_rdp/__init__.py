"""Rate-distortion-perception functions of Gaussian vector sources.

Computes the minimum coding rate of a decorrelated Gaussian vector source
subject to a total squared-error distortion budget and a perception budget
(KL divergence or squared Wasserstein-2 distance between the source and
reconstruction laws), by generalized reverse water-filling. Includes the
classical rate-distortion water-filling solver, asymptotic expansions, an
independent log-barrier primal minimizer, and Monte Carlo verification of
the achieving joint Gaussian pairs.
"""

from .errors import (
    AllComponentsNullError,
    ConvergenceError,
    DimensionZeroError,
    DomainError,
    DualDegenerateError,
    InfeasibleQueryError,
    InfeasibleSeedError,
    LineSearchError,
    NonPositiveDistortionError,
    NotPsdError,
    NotSymmetricError,
    OutOfRangeError,
    RdpError,
)
from .model import (
    ComponentAllocation,
    CurveSweep,
    DualPoint,
    KktResiduals,
    PerceptionMetric,
    RdpSolution,
    SolutionCase,
    SourceSpectrum,
    TradeoffQuery,
    from_covariance,
    max_zero_rate_distortion,
    zero_rate_reconstruction,
)
from .symeig import EigenDecomposition, SymMatrix, decompose, strip_null_components
from .classic_rd import (
    WaterLevel,
    high_distortion_rd_estimate,
    low_distortion_rd_estimate,
    reverse_waterfill,
    water_level,
)
from .kkt import solution_residuals
from .solver import (
    SolverConfig,
    high_distortion_p0_estimate,
    low_distortion_p0_estimate,
    solve,
    solve_perfect_perception,
)
from .oracle import (
    OracleResult,
    PrimalPoint,
    check_gradients,
    minimize_primal,
    minimize_primal_p0,
)
from .montecarlo import (
    JointGaussianPair,
    SampleReport,
    analytic_component_stats,
    build_pair,
    sample_and_measure,
    verify_solution,
)

__all__ = [
    "AllComponentsNullError",
    "ComponentAllocation",
    "ConvergenceError",
    "CurveSweep",
    "DimensionZeroError",
    "DomainError",
    "DualDegenerateError",
    "DualPoint",
    "EigenDecomposition",
    "InfeasibleQueryError",
    "InfeasibleSeedError",
    "JointGaussianPair",
    "KktResiduals",
    "LineSearchError",
    "NonPositiveDistortionError",
    "NotPsdError",
    "NotSymmetricError",
    "OracleResult",
    "OutOfRangeError",
    "PerceptionMetric",
    "PrimalPoint",
    "RdpError",
    "RdpSolution",
    "SampleReport",
    "SolutionCase",
    "SolverConfig",
    "SourceSpectrum",
    "SymMatrix",
    "TradeoffQuery",
    "WaterLevel",
    "analytic_component_stats",
    "build_pair",
    "check_gradients",
    "decompose",
    "from_covariance",
    "high_distortion_p0_estimate",
    "high_distortion_rd_estimate",
    "low_distortion_p0_estimate",
    "low_distortion_rd_estimate",
    "max_zero_rate_distortion",
    "minimize_primal",
    "minimize_primal_p0",
    "reverse_waterfill",
    "sample_and_measure",
    "solution_residuals",
    "solve",
    "solve_perfect_perception",
    "strip_null_components",
    "verify_solution",
    "water_level",
    "zero_rate_reconstruction",
]

__version__ = "0.1.0"
