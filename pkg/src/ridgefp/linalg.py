"""Dense linear-algebra helpers and verification oracles.

Factorizations are delegated to LAPACK through numpy. The power iteration
is implemented directly so that large instances can estimate the top
singular value without paying for a full decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_RANK_TOL = 1e-12

# The dense eigensolver is a test oracle only; refuse desk-unfriendly sizes.
EIG_DIM_CAP = 2000


def as_matrix(a) -> np.ndarray:
    """Coerce to a C-contiguous float64 2-D array with finite entries."""
    m = np.ascontiguousarray(a, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D array, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def as_vector(v) -> np.ndarray:
    """Coerce to a contiguous float64 1-D array with finite entries."""
    x = np.ascontiguousarray(v, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"expected a 1-D array, got ndim={x.ndim}")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector has non-finite entries")
    return x


def matvec(m, v) -> np.ndarray:
    """Matrix-vector product with a hard dimension check."""
    m = np.asarray(m, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if m.ndim != 2 or v.ndim != 1:
        raise ValueError("matvec expects a matrix and a vector")
    if m.shape[1] != v.shape[0]:
        raise ValueError(f"dimension mismatch: {m.shape} @ ({v.shape[0]},)")
    return m @ v


@dataclass(frozen=True)
class SvdResult:
    """Full SVD a = u @ diag(s) @ vt, with the numerical rank.

    ``rank`` counts singular values above ``rank_tol * s[0]``.
    """

    u: np.ndarray
    singular_values: np.ndarray
    vt: np.ndarray
    rank: int


def svd(a, rank_tol: float = DEFAULT_RANK_TOL) -> SvdResult:
    """Full singular value decomposition with relative rank threshold."""
    a = as_matrix(a)
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    try:
        u, s, vt = np.linalg.svd(a, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            f"SVD did not converge for a {a.shape[0]}x{a.shape[1]} matrix"
        ) from exc
    if s.size == 0 or s[0] <= 0.0:
        rank = 0
    else:
        rank = int(np.count_nonzero(s > rank_tol * s[0]))
    return SvdResult(u=u, singular_values=s, vt=vt, rank=rank)


def eigenvalues_dense(m) -> np.ndarray:
    """All eigenvalues (with multiplicity) of a square matrix.

    Verification oracle for the closed-form spectra; capped at
    ``EIG_DIM_CAP`` to keep it desk-scale.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"eigenvalues need a square matrix, got {m.shape}")
    if m.shape[0] > EIG_DIM_CAP:
        raise ValueError(f"matrix dimension {m.shape[0]} exceeds oracle cap {EIG_DIM_CAP}")
    return np.linalg.eigvals(m)


@dataclass(frozen=True)
class PowerIterationResult:
    sigma1: float
    converged: bool
    iterations: int


def power_iteration_sigma1(a, tol: float = 1e-10, max_iter: int = 20000) -> PowerIterationResult:
    """Estimate the largest singular value by power iteration on the Gram map.

    Iterates v <- normalize(A(A^T v)) (or the transpose pair when d > N) and
    reports sigma1 = ||A^T v||. If ``max_iter`` is exhausted the best estimate
    is returned with ``converged=False``.
    """
    a = as_matrix(a)
    if not np.any(a):
        raise ValueError("power iteration needs a nonzero matrix")
    d, big_n = a.shape
    work_on_rows = d <= big_n

    if work_on_rows:
        v = np.sqrt(np.einsum("ij,ij->i", a, a))
    else:
        v = np.sqrt(np.einsum("ij,ij->j", a, a))
    # Deterministic restart direction in case the energy vector is stationary.
    ramp = 1.0 + 1e-3 * np.arange(v.shape[0])

    sigma = 0.0
    for attempt in range(2):
        nv = np.linalg.norm(v)
        if nv == 0.0:
            v = ramp.copy()
            nv = np.linalg.norm(v)
        v /= nv
        sigma = 0.0
        for it in range(1, max_iter + 1):
            if work_on_rows:
                tmp = a.T @ v
                new_sigma = np.linalg.norm(tmp)
                v = a @ tmp
            else:
                tmp = a @ v
                new_sigma = np.linalg.norm(tmp)
                v = a.T @ tmp
            nv = np.linalg.norm(v)
            if nv == 0.0:
                break  # stationary direction; retry from the ramp
            v /= nv
            if new_sigma > 0.0 and abs(new_sigma - sigma) <= tol * new_sigma:
                return PowerIterationResult(sigma1=float(new_sigma), converged=True, iterations=it)
            sigma = new_sigma
        if nv != 0.0:
            return PowerIterationResult(sigma1=float(sigma), converged=False, iterations=max_iter)
        v = ramp * (1.0 + attempt)
    return PowerIterationResult(sigma1=float(sigma), converged=False, iterations=max_iter)
