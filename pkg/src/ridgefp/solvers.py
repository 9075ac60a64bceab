"""Relaxed fixed-point solvers for the primal-dual ridge problem, plus a
conjugate-gradient baseline on the duality-gap quadratic.

All schemes iterate x^{k+1} = (1-theta) x^k + theta (update of x^k) and are
matrix-free: only products with A and A^T are formed. The per-step update
rules live in :mod:`ridgefp.kernels` (compiled when available). The
assembled-system path (:func:`step_generic`) exists for desk-scale checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels, spectral
from .linalg import power_iteration_sigma1, svd
from .problem import (
    OptimalitySystem,
    PrimalDualPoint,
    RidgeProblem,
    build_system,
    gap_gradient,
    gap_value,
    hessian_vec,
    COUPLED,
    SEPARABLE,
)

CG = "CG"
METHODS = spectral.FIXED_POINT_METHODS + (CG,)

CONVERGED = "converged"
MAX_ITER = "max_iter"
DIVERGED = "diverged"

GAP = "gap"
RESIDUAL = "residual"

# Iterates beyond this sup-norm are declared divergent.
DIVERGENCE_CAP = 1e12

OPTIMAL = "optimal"
PURE = "pure"


@dataclass
class SolverConfig:
    """Method selection plus stopping rule.

    ``theta`` is an explicit positive float, ``"optimal"`` (resolved from
    sigma1 per method), or ``"pure"`` (theta = 1). The default stopping
    metric is the duality gap, which is an absolute error measure since
    f(x*) = 0.
    """

    method: str
    theta: float | str = OPTIMAL
    max_iter: int = 100_000
    tol: float = 1e-10
    tol_metric: str = GAP
    record_trace: bool = False
    exact_sigma: bool = False

    def __post_init__(self):
        self.method = self.method.upper()
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.tol_metric not in (GAP, RESIDUAL):
            raise ValueError(f"unknown tol_metric {self.tol_metric!r}")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if isinstance(self.theta, str):
            self.theta = self.theta.lower()
            if self.theta not in (OPTIMAL, PURE):
                raise ValueError(f"theta must be a number, 'optimal' or 'pure', got {self.theta!r}")
        elif not float(self.theta) > 0.0:
            raise ValueError("explicit theta must be positive")


@dataclass
class ConvergenceTrace:
    """Per-iteration history; row k describes the state after iteration k."""

    k: list[int] = field(default_factory=list)
    gap: list[float] = field(default_factory=list)
    dist: list[float] = field(default_factory=list)
    step_residual: list[float] = field(default_factory=list)
    rate_estimate: list[float] = field(default_factory=list)
    status: str = MAX_ITER

    def __len__(self):
        return len(self.k)

    def append(self, k, gap, dist, step_residual, rate_estimate):
        self.k.append(k)
        self.gap.append(gap)
        self.dist.append(dist)
        self.step_residual.append(step_residual)
        self.rate_estimate.append(rate_estimate)


@dataclass
class SolveResult:
    x: PrimalDualPoint
    iterations: int
    status: str
    theta_used: float | None
    trace: ConvergenceTrace | None = None


def sigma1_estimate(problem: RidgeProblem, exact: bool = False) -> float:
    """Largest singular value of A: power iteration with SVD fallback."""
    if not np.any(problem.a):
        return 0.0
    if not exact:
        res = power_iteration_sigma1(problem.a, tol=1e-8, max_iter=5000)
        if res.converged:
            return res.sigma1
    return float(svd(problem.a).singular_values[0])


def resolve_theta(problem: RidgeProblem, method: str, theta, exact_sigma: bool = False) -> float:
    """Turn a theta request into a number (resolving 'optimal' / 'pure')."""
    if isinstance(theta, str):
        if theta == PURE:
            return 1.0
        if theta == OPTIMAL:
            return spectral.optimal_theta(method, sigma1_estimate(problem, exact_sigma), problem.lam_n)
        raise ValueError(f"unknown theta spec {theta!r}")
    theta = float(theta)
    if not theta > 0.0:
        raise ValueError("theta must be positive")
    return theta


def empirical_rate(values) -> float:
    """Geometric mean of the last-half per-step ratios of a decaying series,
    i.e. (q_k / q_{k/2})^(1/(k - k/2)). NaN when not yet estimable."""
    r = len(values) - 1
    if r < 2:
        return math.nan
    i0 = r // 2
    q0, q1 = values[i0], values[r]
    if not (q0 > 0.0 and q1 > 0.0 and math.isfinite(q0) and math.isfinite(q1)):
        return math.nan
    return (q1 / q0) ** (1.0 / (r - i0))


# ---------------------------------------------------------------------------
# Single steps (public, allocation-per-call; the solve loop uses the kernels
# with reused buffers instead).
# ---------------------------------------------------------------------------

def step_generic(system: OptimalitySystem, x: PrimalDualPoint, theta: float) -> PrimalDualPoint:
    """One relaxed step x <- (1-theta) x + theta (M x + b) on an assembled system."""
    vec = x.concat()
    out = (1.0 - theta) * vec + theta * system.apply(vec)
    return PrimalDualPoint(out[: system.d], out[system.d :])


def _step_via_kernel(kernel_name, problem, x, theta, needs_ay=False):
    w_out = np.empty(problem.d)
    alpha_out = np.empty(problem.big_n)
    tmp_n = np.empty(problem.big_n)
    tmp_d = np.empty(problem.d)
    kern = getattr(kernels, kernel_name)
    w = np.ascontiguousarray(x.w, dtype=np.float64)
    alpha = np.ascontiguousarray(x.alpha, dtype=np.float64)
    if needs_ay:
        kern(problem.a, problem.y, problem.a @ problem.y, problem.lam_n, theta,
             w, alpha, w_out, alpha_out, tmp_n, tmp_d)
    else:
        kern(problem.a, problem.y, problem.lam_n, theta,
             w, alpha, w_out, alpha_out, tmp_n, tmp_d)
    return PrimalDualPoint(w_out, alpha_out)


def step_pdfp1(problem, x, theta):
    """Relaxed step on the block-diagonal system, matrix-free."""
    return _step_via_kernel("step_pdfp1", problem, x, theta, needs_ay=True)


def step_pdfp2(problem, x, theta):
    """Relaxed step on the coupled system (both blocks use the old iterate)."""
    return _step_via_kernel("step_pdfp2", problem, x, theta)


def step_qtz(problem, x, theta):
    """Gauss-Seidel relaxed step: w first, alpha sees the fresh w."""
    return _step_via_kernel("step_qtz", problem, x, theta)


def step_nqtz(problem, x, theta):
    """Gauss-Seidel with the dual updated first."""
    return _step_via_kernel("step_nqtz", problem, x, theta)


def step_mqtz(problem, x, theta):
    """w pinned to the optimality relation, relaxation on alpha only."""
    return _step_via_kernel("step_mqtz", problem, x, theta)


def step_mqtz2(problem, x, theta):
    """alpha pinned to the optimality relation, relaxation on w only."""
    return _step_via_kernel("step_mqtz2", problem, x, theta)


def two_step_equivalence_check(problem: RidgeProblem, x: PrimalDualPoint) -> float:
    """Norm of (two pure coupled-system steps) minus (one pure block-diagonal
    step); zero in exact arithmetic because M2^2 = M1 and M2 b2 + b2 = b1."""
    sys1 = build_system(problem, SEPARABLE)
    sys2 = build_system(problem, COUPLED)
    vec = x.concat()
    one_step = sys1.apply(vec)
    two_steps = sys2.apply(sys2.apply(vec))
    return float(np.linalg.norm(two_steps - one_step))


# ---------------------------------------------------------------------------
# Solve loops
# ---------------------------------------------------------------------------

def _record_gap(problem, w, alpha):
    g = gap_value(problem, PrimalDualPoint(w, alpha))
    # cancellation floor: tiny negative gaps near the optimum are clamped
    if -1e-12 < g < 0.0:
        return 0.0, g
    return g, g


def solve(problem: RidgeProblem, config: SolverConfig,
          x0: PrimalDualPoint | None = None,
          x_star: PrimalDualPoint | None = None) -> SolveResult:
    """Run the configured scheme until the stopping metric falls below tol,
    the iteration cap is hit, or the iterate diverges.

    ``x_star`` is optional oracle knowledge: when given, the trace carries
    distances to it (it never influences the iteration).
    """
    if config.method == CG:
        return solve_cg(problem, config, x0=x0, x_star=x_star)

    theta = resolve_theta(problem, config.method, config.theta, config.exact_sigma)
    d, big_n = problem.d, problem.big_n

    x0 = x0 if x0 is not None else PrimalDualPoint.zeros(problem)
    if x0.w.shape != (d,) or x0.alpha.shape != (big_n,):
        raise ValueError("x0 dimensions do not match the problem")
    w = np.array(x0.w, dtype=np.float64)
    alpha = np.array(x0.alpha, dtype=np.float64)
    w_out = np.empty_like(w)
    alpha_out = np.empty_like(alpha)
    tmp_n = np.empty(big_n)
    tmp_d = np.empty(d)

    method = config.method
    kern = getattr(kernels, f"step_{method.lower()}")
    extra = (problem.a @ problem.y,) if method == spectral.PDFP1 else ()

    want_gap = config.record_trace or config.tol_metric == GAP
    trace = ConvergenceTrace() if config.record_trace else None
    dists = [] if x_star is not None else None

    if config.tol_metric == GAP:
        g0 = gap_value(problem, PrimalDualPoint(w, alpha))
        if g0 <= config.tol:
            if trace is not None:
                trace.status = CONVERGED
            return SolveResult(PrimalDualPoint(w, alpha), 0, CONVERGED, theta, trace)

    status = MAX_ITER
    iterations = 0
    residuals = []
    for k in range(1, config.max_iter + 1):
        kern(problem.a, problem.y, *extra, problem.lam_n, theta,
             w, alpha, w_out, alpha_out, tmp_n, tmp_d)
        iterations = k
        if not (np.all(np.isfinite(w_out)) and np.all(np.isfinite(alpha_out))):
            status = DIVERGED
            break
        res = math.sqrt(
            float(np.sum((w_out - w) ** 2)) + float(np.sum((alpha_out - alpha) ** 2))
        )
        residuals.append(res)
        w, w_out = w_out, w
        alpha, alpha_out = alpha_out, alpha

        gap_rec = math.nan
        gap_raw = math.inf
        if want_gap:
            gap_rec, gap_raw = _record_gap(problem, w, alpha)
        dist = math.nan
        if dists is not None:
            dist = math.sqrt(
                float(np.sum((w - x_star.w) ** 2)) + float(np.sum((alpha - x_star.alpha) ** 2))
            )
            dists.append(dist)
        if trace is not None:
            rate = empirical_rate(dists if dists is not None else residuals)
            trace.append(k, gap_rec, dist, res, rate)

        if max(np.max(np.abs(w)), np.max(np.abs(alpha))) > DIVERGENCE_CAP:
            status = DIVERGED
            break
        metric = gap_raw if config.tol_metric == GAP else res
        if metric <= config.tol:
            status = CONVERGED
            break

    if trace is not None:
        trace.status = status
    return SolveResult(PrimalDualPoint(w.copy(), alpha.copy()), iterations, status, theta, trace)


def solve_cg(problem: RidgeProblem, config: SolverConfig,
             x0: PrimalDualPoint | None = None,
             x_star: PrimalDualPoint | None = None) -> SolveResult:
    """Conjugate gradients on the gap quadratic, via Hessian-vector products.

    Minimizing f(x) = x^T H x / 2 + g^T x + f(0) is solving H x = -g with
    g = grad f(0); the minimizer is x*, so the same stopping metrics apply.
    """
    d, big_n = problem.d, problem.big_n
    x0 = x0 if x0 is not None else PrimalDualPoint.zeros(problem)
    w = np.array(x0.w, dtype=np.float64)
    alpha = np.array(x0.alpha, dtype=np.float64)

    grad = gap_gradient(problem, PrimalDualPoint(w, alpha))
    rw, ra = -grad.w, -grad.alpha
    pw, pa = rw.copy(), ra.copy()
    rs = float(rw @ rw + ra @ ra)

    want_gap = config.record_trace or config.tol_metric == GAP
    trace = ConvergenceTrace() if config.record_trace else None
    dists = [] if x_star is not None else None

    if config.tol_metric == GAP:
        g0 = gap_value(problem, PrimalDualPoint(w, alpha))
        if g0 <= config.tol:
            if trace is not None:
                trace.status = CONVERGED
            return SolveResult(PrimalDualPoint(w, alpha), 0, CONVERGED, None, trace)

    status = MAX_ITER
    iterations = 0
    residuals = []
    for k in range(1, config.max_iter + 1):
        hw, ha = hessian_vec(problem, pw, pa)
        denom = float(pw @ hw + pa @ ha)
        iterations = k
        if denom <= 0.0 or not math.isfinite(denom):
            # H is positive definite; this can only be rounding at the floor
            status = CONVERGED if rs <= config.tol ** 2 else MAX_ITER
            break
        step = rs / denom
        w += step * pw
        alpha += step * pa
        res = abs(step) * math.sqrt(float(pw @ pw + pa @ pa))
        residuals.append(res)
        rw -= step * hw
        ra -= step * ha
        rs_new = float(rw @ rw + ra @ ra)
        beta = rs_new / rs
        pw = rw + beta * pw
        pa = ra + beta * pa
        rs = rs_new

        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(alpha))):
            status = DIVERGED
            break
        gap_rec = math.nan
        gap_raw = math.inf
        if want_gap:
            gap_rec, gap_raw = _record_gap(problem, w, alpha)
        dist = math.nan
        if dists is not None:
            dist = math.sqrt(
                float(np.sum((w - x_star.w) ** 2)) + float(np.sum((alpha - x_star.alpha) ** 2))
            )
            dists.append(dist)
        if trace is not None:
            rate = empirical_rate(dists if dists is not None else residuals)
            trace.append(k, gap_rec, dist, res, rate)
        if max(np.max(np.abs(w)), np.max(np.abs(alpha))) > DIVERGENCE_CAP:
            status = DIVERGED
            break
        metric = gap_raw if config.tol_metric == GAP else res
        if metric <= config.tol:
            status = CONVERGED
            break

    if trace is not None:
        trace.status = status
    return SolveResult(PrimalDualPoint(w, alpha), iterations, status, None, trace)
