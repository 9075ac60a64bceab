"""Ridge regression model: primal/dual objectives, gradients, conjugate
identities, the two optimality-condition systems, and a direct-solve oracle.

The primal problem is

    min_w  P(w) = (1/2n) ||A^T w - y||^2 + (lambda/2) ||w||^2

with observations stacked into A (d x N, N = n*m) and responses into y.
Its Fenchel dual is again a ridge problem in alpha (length N), and the gap
f(w, alpha) = P(w) - D(alpha) is the quadratic the fixed-point methods
minimize; it vanishes exactly at the optimal pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import as_matrix, as_vector

SEPARABLE = "separable"
COUPLED = "coupled"


@dataclass(frozen=True)
class RidgeProblem:
    """Immutable problem data (A, y, lambda) plus block bookkeeping.

    ``m`` is the per-observation block size; the solvers treat y and alpha
    flat, blocks only matter for the per-observation conjugate.
    """

    a: np.ndarray
    y: np.ndarray
    lam: float
    n: int
    m: int

    def __post_init__(self):
        a = as_matrix(self.a)
        y = as_vector(self.y)
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive")
        if not self.lam > 0.0:
            raise ValueError("lambda must be positive")
        big_n = self.n * self.m
        if a.shape[1] != big_n:
            raise ValueError(f"A has {a.shape[1]} columns, expected n*m = {big_n}")
        if y.shape[0] != big_n:
            raise ValueError(f"y has length {y.shape[0]}, expected n*m = {big_n}")
        a.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "lam", float(self.lam))

    @property
    def d(self) -> int:
        return self.a.shape[0]

    @property
    def big_n(self) -> int:
        return self.n * self.m

    @property
    def lam_n(self) -> float:
        return self.lam * self.n

    def y_block(self, i: int) -> np.ndarray:
        """Response block y_i, 1-based."""
        if not 1 <= i <= self.n:
            raise IndexError(f"block index {i} outside 1..{self.n}")
        return self.y[(i - 1) * self.m : i * self.m]


@dataclass
class PrimalDualPoint:
    """Concatenated iterate x = (w, alpha)."""

    w: np.ndarray
    alpha: np.ndarray

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=np.float64)
        self.alpha = np.asarray(self.alpha, dtype=np.float64)

    @classmethod
    def zeros(cls, problem: RidgeProblem) -> "PrimalDualPoint":
        return cls(np.zeros(problem.d), np.zeros(problem.big_n))

    @classmethod
    def from_concat(cls, problem: RidgeProblem, vec) -> "PrimalDualPoint":
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (problem.d + problem.big_n,):
            raise ValueError("concatenated vector has wrong length")
        return cls(vec[: problem.d].copy(), vec[problem.d :].copy())

    def concat(self) -> np.ndarray:
        return np.concatenate([self.w, self.alpha])

    def copy(self) -> "PrimalDualPoint":
        return PrimalDualPoint(self.w.copy(), self.alpha.copy())


def _check_w(problem, w):
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (problem.d,):
        raise ValueError(f"w has shape {w.shape}, expected ({problem.d},)")
    return w


def _check_alpha(problem, alpha):
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.shape != (problem.big_n,):
        raise ValueError(f"alpha has shape {alpha.shape}, expected ({problem.big_n},)")
    return alpha


def primal_value(problem: RidgeProblem, w) -> float:
    """P(w) = (1/2n)||A^T w - y||^2 + (lambda/2)||w||^2."""
    w = _check_w(problem, w)
    r = problem.a.T @ w - problem.y
    return 0.5 / problem.n * float(r @ r) + 0.5 * problem.lam * float(w @ w)


def dual_value(problem: RidgeProblem, alpha) -> float:
    """D(alpha) = -(1/2 lambda n^2)||A alpha||^2 + (1/n) alpha^T y - (1/2n)||alpha||^2."""
    alpha = _check_alpha(problem, alpha)
    aa = problem.a @ alpha
    n = problem.n
    return (
        -0.5 / (problem.lam * n * n) * float(aa @ aa)
        + float(alpha @ problem.y) / n
        - 0.5 / n * float(alpha @ alpha)
    )


def gap_value(problem: RidgeProblem, x: PrimalDualPoint) -> float:
    """Duality gap f(x) = P(w) - D(alpha); nonnegative, zero only at x*."""
    return primal_value(problem, x.w) - dual_value(problem, x.alpha)


def gap_gradient(problem: RidgeProblem, x: PrimalDualPoint) -> PrimalDualPoint:
    """Gradient of the gap: (grad P(w), -grad D(alpha))."""
    w = _check_w(problem, x.w)
    alpha = _check_alpha(problem, x.alpha)
    a, y, n = problem.a, problem.y, problem.n
    grad_p = a @ (a.T @ w - y) / n + problem.lam * w
    grad_d = -a.T @ (a @ alpha) / (problem.lam * n * n) - alpha / n + y / n
    return PrimalDualPoint(grad_p, -grad_d)


def conjugate_phi(problem: RidgeProblem, i: int, s) -> float:
    """Fenchel conjugate of phi_i(z) = ||z - y_i||^2 / 2: value ||s||^2/2 + s^T y_i."""
    s = np.asarray(s, dtype=np.float64)
    if s.shape != (problem.m,):
        raise ValueError(f"s has shape {s.shape}, expected ({problem.m},)")
    yi = problem.y_block(i)
    return 0.5 * float(s @ s) + float(s @ yi)


def conjugate_g(u) -> float:
    """Fenchel conjugate of the regularizer g(w) = ||w||^2 / 2 (self-conjugate)."""
    u = np.asarray(u, dtype=np.float64)
    return 0.5 * float(u @ u)


def alphabar(problem: RidgeProblem, alpha) -> np.ndarray:
    """The averaged dual point alpha_bar = (1/lambda n) A alpha (length d)."""
    alpha = _check_alpha(problem, alpha)
    return problem.a @ alpha / problem.lam_n


def dual_value_conjugate_form(problem: RidgeProblem, alpha) -> float:
    """D(alpha) written through the conjugates:
    -lambda g*(alpha_bar) - (1/n) sum_i phi_i*(-alpha_i)."""
    alpha = _check_alpha(problem, alpha)
    ab = alphabar(problem, alpha)
    total = -problem.lam * conjugate_g(ab)
    for i in range(1, problem.n + 1):
        si = -alpha[(i - 1) * problem.m : i * problem.m]
        total -= conjugate_phi(problem, i, si) / problem.n
    return total


@dataclass(frozen=True)
class OptimalitySystem:
    """Assembled fixed-point system x = M x + b (desk scale; the solvers
    themselves stay matrix-free)."""

    m: np.ndarray
    b: np.ndarray
    tag: str
    d: int = field(default=0)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.m @ vec + self.b


def build_system(problem: RidgeProblem, tag: str) -> OptimalitySystem:
    """Assemble (M1, b1) for the block-diagonal form or (M2, b2) for the
    coupled form of the optimality conditions."""
    a, y = problem.a, problem.y
    d, big_n = problem.d, problem.big_n
    lam_n = problem.lam_n
    mat = np.zeros((d + big_n, d + big_n))
    if tag == SEPARABLE:
        mat[:d, :d] = -(a @ a.T) / lam_n
        mat[d:, d:] = -(a.T @ a) / lam_n
        b = np.concatenate([a @ y / lam_n, y])
    elif tag == COUPLED:
        mat[:d, d:] = a / lam_n
        mat[d:, :d] = -a.T
        b = np.concatenate([np.zeros(d), y])
    else:
        raise ValueError(f"unknown system tag {tag!r}")
    return OptimalitySystem(m=mat, b=b, tag=tag, d=d)


def solve_direct(problem: RidgeProblem) -> PrimalDualPoint:
    """Oracle solution: solve (A A^T + lambda n I) w = A y densely, then
    recover alpha = y - A^T w."""
    a, y = problem.a, problem.y
    gram = a @ a.T + problem.lam_n * np.eye(problem.d)
    try:
        w = np.linalg.solve(gram, a @ y)
    except np.linalg.LinAlgError as exc:  # cannot happen for lambda > 0
        raise np.linalg.LinAlgError("direct ridge solve failed") from exc
    alpha = y - a.T @ w
    return PrimalDualPoint(w, alpha)


def hessian_vec(problem: RidgeProblem, w, alpha):
    """Product of the gap Hessian with (w, alpha); the Hessian is block
    diagonal: (1/n)(A A^T + lambda n I) and (1/n)(A^T A / lambda n + I)."""
    a, n = problem.a, problem.n
    hw = (a @ (a.T @ w) + problem.lam_n * w) / n
    ha = (a.T @ (a @ alpha) / problem.lam_n + alpha) / n
    return hw, ha


def hessian_dense(problem: RidgeProblem) -> np.ndarray:
    """Assembled gap Hessian (test oracle for the conditioning report)."""
    a = problem.a
    d, big_n, n = problem.d, problem.big_n, problem.n
    h = np.zeros((d + big_n, d + big_n))
    h[:d, :d] = (a @ a.T + problem.lam_n * np.eye(d)) / n
    h[d:, d:] = (a.T @ a / problem.lam_n + np.eye(big_n)) / n
    return h
