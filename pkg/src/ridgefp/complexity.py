"""Conditioning of the gap quadratic, iteration-count predictions, and the
static per-iteration arithmetic cost model.

The cost table is a claim about the schemes, not a runtime measurement: a
product with A or A^T is 2dN flops, and the counts below additionally price
the relaxed vector updates and the per-iteration objective evaluation.
A plausible accounting for the leading terms: the block-diagonal scheme
needs four A-products per step plus one for the constant term when not
cached (10dN); the coupled/Gauss-Seidel schemes need A alpha, A^T w and one
more product for the objective (6dN). We treat the published constants as
given either way.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .problem import RidgeProblem
from .spectral import (
    MQTZ,
    NQTZ,
    PDFP1,
    PDFP2,
    QTZ,
    SpectralInfo,
    optimal_theta,
)

LAMBDA_N_GEQ_1 = "lambda_n_geq_1"
LAMBDA_N_LT_1 = "lambda_n_lt_1"

D_LT_N = "d_lt_n"
D_EQ_N = "d_eq_n"
D_GT_N = "d_gt_n"


@dataclass(frozen=True)
class ConditioningReport:
    l_smooth: float
    mu: float
    kappa: float
    regime: str
    shape: str


def _sigma_k(s: SpectralInfo, k: int) -> float:
    """k-th singular value (1-based), zero beyond the rank."""
    return float(s.sigma[k - 1]) if k <= s.p else 0.0


def conditioning(problem: RidgeProblem, s: SpectralInfo) -> ConditioningReport:
    """Extreme eigenvalues of the gap Hessian and their ratio.

    The Hessian is block diagonal with blocks (A A^T + lambda n I)/n and
    (A^T A/(lambda n) + I)/n, so everything follows from the singular values
    and the (d vs N, lambda n vs 1) case split.
    """
    d, big_n, n = problem.d, problem.big_n, problem.n
    lam, lam_n = problem.lam, problem.lam_n
    s1 = s.sigma1

    if lam_n >= 1.0:
        regime = LAMBDA_N_GEQ_1
        l_smooth = (s1 * s1 + lam_n) / n
        if d < big_n:
            shape = D_LT_N
            mu = 1.0 / n
        elif d == big_n:
            shape = D_EQ_N
            sd = _sigma_k(s, d)
            mu = sd * sd / (lam_n * n) + 1.0 / n
        else:
            shape = D_GT_N
            sn = _sigma_k(s, big_n)
            mu = min(lam, sn * sn / (lam_n * n) + 1.0 / n)
    else:
        regime = LAMBDA_N_LT_1
        l_smooth = (s1 * s1 + lam_n) / (lam_n * n)
        if d < big_n:
            shape = D_LT_N
            sd = _sigma_k(s, d)
            mu = min(sd * sd / n + lam, 1.0 / n)
        elif d == big_n:
            shape = D_EQ_N
            sd = _sigma_k(s, d)
            mu = sd * sd / n + lam
        else:
            shape = D_GT_N
            mu = lam
    return ConditioningReport(l_smooth=l_smooth, mu=mu, kappa=l_smooth / mu,
                              regime=regime, shape=shape)


def iterations_to_eps(rho: float, l_smooth: float, dist0: float, eps: float) -> int | None:
    """Smallest k with f(x^k) < eps under linear rate rho on the iterates:
    k > log(dist0^2 L / (2 eps)) / (-2 log rho).

    Returns 0 when already within tolerance at k = 0, and None (unbounded)
    when rho >= 1.
    """
    if not eps > 0.0:
        raise ValueError("eps must be positive")
    if not 0.0 < rho:
        raise ValueError("rho must be positive")
    if rho >= 1.0:
        return None
    arg = dist0 * dist0 * l_smooth / (2.0 * eps)
    if arg <= 1.0:
        return 0
    bound = math.log(arg) / (-2.0 * math.log(rho))
    return int(math.floor(bound)) + 1


def complexity_factors(s: SpectralInfo) -> tuple[float, float, float]:
    """The three iteration-count proportionality factors
    (1/(2 theta1*), 1/theta2*, 1/(2 theta3*)).

    Their closed forms in terms of kappa assume the common regime
    lambda n >= 1 with d < N; outside it a warning is issued and the factors
    are still returned (they only depend on sigma1 and lambda n).
    """
    if not (s.lam_n >= 1.0 and s.d < s.big_n):
        warnings.warn(
            "complexity factors reported outside the lambda*n >= 1, d < N regime; "
            "the kappa identities do not apply",
            stacklevel=2,
        )
    s1, lam_n = s.sigma1, s.lam_n
    f1 = 1.0 / (2.0 * optimal_theta(PDFP1, s1, lam_n))
    f2 = 1.0 / optimal_theta(PDFP2, s1, lam_n)
    f3 = 1.0 / (2.0 * optimal_theta(QTZ, s1, lam_n))
    return f1, f2, f3


_COST_TABLE = {
    PDFP1: lambda d, n: 10 * d * n + 5 * d + 9 * n,
    PDFP2: lambda d, n: 6 * d * n + 5 * d + 9 * n,
    QTZ: lambda d, n: 6 * d * n + 5 * d + 9 * n,
    NQTZ: lambda d, n: 6 * d * n + 5 * d + 9 * n,
    MQTZ: lambda d, n: 6 * d * n + 3 * d + 9 * n,
    "CG": lambda d, n: 4 * d * d + 4 * n * n + 4 * d * n + 14 * d + 17 * n,
}


def cost_per_iteration(method: str, d: int, big_n: int) -> int:
    """Published arithmetic operations per iteration. MQTZ2 has no published
    row and is rejected."""
    if d < 1 or big_n < 1:
        raise ValueError("dimensions must be positive")
    try:
        formula = _COST_TABLE[method.upper()]
    except KeyError:
        raise ValueError(f"no per-iteration cost model for method {method!r}") from None
    return int(formula(d, big_n))
