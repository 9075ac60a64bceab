"""Primal-dual fixed-point solvers for ridge regression.

The library carries the ridge primal/dual model, closed-form spectral
analysis of every iteration-matrix family, the relaxed fixed-point schemes
with optimal relaxation parameters, conditioning/cost models, seeded
problem generation, and a CLI (``ridgefp``).
"""

from .complexity import (
    ConditioningReport,
    complexity_factors,
    conditioning,
    cost_per_iteration,
    iterations_to_eps,
)
from .io import GeneratorSpec, generate_problem, load_problem, save_problem, write_trace
from .kernels import BACKEND as KERNEL_BACKEND
from .linalg import eigenvalues_dense, matvec, power_iteration_sigma1, svd
from .problem import (
    OptimalitySystem,
    PrimalDualPoint,
    RidgeProblem,
    alphabar,
    build_system,
    conjugate_phi,
    dual_value,
    gap_gradient,
    gap_value,
    primal_value,
    solve_direct,
)
from .solvers import ConvergenceTrace, SolveResult, SolverConfig, solve, solve_cg
from .spectral import (
    RateReport,
    SpectralInfo,
    rate_report,
    spectral_radii,
    spectrum_g1,
    spectrum_g2,
    spectrum_g3,
    spectrum_m1,
    spectrum_m2,
    theta_thresholds,
)

__version__ = "0.1.0"

__all__ = [
    "ConditioningReport",
    "ConvergenceTrace",
    "GeneratorSpec",
    "KERNEL_BACKEND",
    "OptimalitySystem",
    "PrimalDualPoint",
    "RateReport",
    "RidgeProblem",
    "SolveResult",
    "SolverConfig",
    "SpectralInfo",
    "alphabar",
    "build_system",
    "complexity_factors",
    "conditioning",
    "conjugate_phi",
    "cost_per_iteration",
    "dual_value",
    "eigenvalues_dense",
    "gap_gradient",
    "gap_value",
    "generate_problem",
    "iterations_to_eps",
    "load_problem",
    "matvec",
    "power_iteration_sigma1",
    "primal_value",
    "rate_report",
    "save_problem",
    "solve",
    "solve_cg",
    "solve_direct",
    "spectral_radii",
    "spectrum_g1",
    "spectrum_g2",
    "spectrum_g3",
    "spectrum_m1",
    "spectrum_m2",
    "svd",
    "theta_thresholds",
    "write_trace",
]
