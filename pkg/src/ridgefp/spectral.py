"""Closed-form spectra of the iteration matrices and the relaxation
parameter theory built on them.

Everything here is computed from the singular values of A alone, in O(p):
the (d+N)-dimensional matrices are never assembled outside of test oracles.

Notation used throughout: ``lam_n`` is lambda*n, ``sigma`` the positive
singular values in non-increasing order, ``p`` their count. The three
iteration-matrix families are

    G1(theta) = (1-theta) I + theta M1     block-diagonal system
    G2(theta) = (1-theta) I + theta M2     coupled system
    G3(theta)                              Gauss-Seidel (accelerated) scheme

and ``theta_bar[j]`` is the zero of delta_j(theta) = theta^2 sigma_j^2
- 4 (1-theta) lam_n, where the j-th eigenvalue pair of G3 leaves the circle
of radius 1-theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import svd
from .problem import RidgeProblem

PDFP1 = "PDFP1"
PDFP2 = "PDFP2"
QTZ = "QTZ"
NQTZ = "NQTZ"
MQTZ = "MQTZ"
MQTZ2 = "MQTZ2"

FIXED_POINT_METHODS = (PDFP1, PDFP2, QTZ, NQTZ, MQTZ, MQTZ2)

# Methods sharing G1's spectrum / G3's spectrum respectively.
_G1_FAMILY = (PDFP1, MQTZ, MQTZ2)
_G3_FAMILY = (QTZ, NQTZ)


@dataclass(frozen=True)
class SpectralInfo:
    """Positive singular values of A plus the dimensions that fix the
    zero-eigenvalue multiplicities."""

    sigma: np.ndarray
    p: int
    d: int
    big_n: int
    lam_n: float

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=np.float64)
        if sigma.ndim != 1 or sigma.shape[0] != self.p:
            raise ValueError("sigma must be a 1-D array of length p")
        if self.p > 0:
            if np.any(sigma <= 0.0) or np.any(np.diff(sigma) > 0.0):
                raise ValueError("sigma must be positive and non-increasing")
        if self.p > min(self.d, self.big_n):
            raise ValueError("rank exceeds min(d, N)")
        if not self.lam_n > 0.0:
            raise ValueError("lambda*n must be positive")
        object.__setattr__(self, "sigma", sigma)

    @classmethod
    def from_problem(cls, problem: RidgeProblem, rank_tol: float = 1e-12) -> "SpectralInfo":
        fac = svd(problem.a, rank_tol=rank_tol)
        return cls(
            sigma=fac.singular_values[: fac.rank].copy(),
            p=fac.rank,
            d=problem.d,
            big_n=problem.big_n,
            lam_n=problem.lam_n,
        )

    @property
    def sigma1(self) -> float:
        return float(self.sigma[0]) if self.p > 0 else 0.0

    @property
    def zero_multiplicity(self) -> int:
        return self.d + self.big_n - 2 * self.p


def delta(s: SpectralInfo, j: int, theta: float) -> float:
    """delta_j(theta) = theta^2 sigma_j^2 - 4 (1-theta) lam_n, j 1-based."""
    if not 1 <= j <= s.p:
        raise IndexError(f"j={j} outside 1..{s.p}")
    sj = float(s.sigma[j - 1])
    return theta * theta * sj * sj - 4.0 * (1.0 - theta) * s.lam_n


def theta_bar(sigma_j: float, lam_n: float) -> float:
    """Zero of delta_j, via the rationalized form 2 / (1 + sqrt(1 + sigma^2/lam_n))
    (stable when sigma_j^2 << lam_n)."""
    return 2.0 / (1.0 + math.sqrt(1.0 + sigma_j * sigma_j / lam_n))


def theta_thresholds(s: SpectralInfo) -> np.ndarray:
    """All thresholds theta_bar[1] <= ... <= theta_bar[p], in (0, 1)."""
    return np.array([theta_bar(float(sj), s.lam_n) for sj in s.sigma])


def spectral_radii(s: SpectralInfo) -> tuple[float, float]:
    """Spectral radii of (M1, M2): (sigma1^2/lam_n, sigma1/sqrt(lam_n))."""
    if s.p == 0:
        return 0.0, 0.0
    s1 = s.sigma1
    return s1 * s1 / s.lam_n, s1 / math.sqrt(s.lam_n)


def spectrum_m1(s: SpectralInfo) -> np.ndarray:
    """Eigenvalues of M1: -sigma_j^2/lam_n with multiplicity 2 each, plus
    zeros filling up to d+N."""
    out = np.zeros(s.d + s.big_n, dtype=np.complex128)
    vals = -np.square(s.sigma) / s.lam_n
    out[: 2 * s.p] = np.repeat(vals, 2)
    return out


def spectrum_m2(s: SpectralInfo) -> np.ndarray:
    """Eigenvalues of M2: the imaginary pairs +/- i sigma_j/sqrt(lam_n)."""
    out = np.zeros(s.d + s.big_n, dtype=np.complex128)
    root = s.sigma / math.sqrt(s.lam_n)
    out[: 2 * s.p : 2] = 1j * root
    out[1 : 2 * s.p : 2] = -1j * root
    return out


def spectrum_g1(s: SpectralInfo, theta: float) -> np.ndarray:
    """Eigenvalues of G1(theta): 1-theta-theta sigma_j^2/lam_n (twice each)
    plus 1-theta on the zero block."""
    out = np.full(s.d + s.big_n, 1.0 - theta, dtype=np.complex128)
    vals = 1.0 - theta - theta * np.square(s.sigma) / s.lam_n
    out[: 2 * s.p] = np.repeat(vals, 2)
    return out


def spectrum_g2(s: SpectralInfo, theta: float) -> np.ndarray:
    """Eigenvalues of G2(theta): 1-theta +/- i theta sigma_j/sqrt(lam_n)."""
    out = np.full(s.d + s.big_n, 1.0 - theta, dtype=np.complex128)
    imag = theta * s.sigma / math.sqrt(s.lam_n)
    out[: 2 * s.p : 2] += 1j * imag
    out[1 : 2 * s.p : 2] -= 1j * imag
    return out


def g3_pair(sigma_j: float, lam_n: float, theta: float) -> tuple[complex, complex]:
    """The (minus, plus) eigenvalue pair of G3(theta) for one singular value:
    (2(1-theta) lam_n - theta^2 sigma^2 -/+ theta sigma sqrt(delta)) / (2 lam_n),
    a conjugate pair while delta < 0."""
    dj = theta * theta * sigma_j * sigma_j - 4.0 * (1.0 - theta) * lam_n
    base = 2.0 * (1.0 - theta) * lam_n - theta * theta * sigma_j * sigma_j
    if dj >= 0.0:
        spread = theta * sigma_j * math.sqrt(dj)
        lo = (base - spread) / (2.0 * lam_n)
        hi = (base + spread) / (2.0 * lam_n)
        return complex(lo), complex(hi)
    spread = theta * sigma_j * math.sqrt(-dj)
    re = base / (2.0 * lam_n)
    im = spread / (2.0 * lam_n)
    return complex(re, -im), complex(re, im)


def spectrum_g3(s: SpectralInfo, theta: float) -> np.ndarray:
    """Eigenvalues of the Gauss-Seidel iteration matrix G3(theta)."""
    out = np.full(s.d + s.big_n, 1.0 - theta, dtype=np.complex128)
    for j in range(s.p):
        lo, hi = g3_pair(float(s.sigma[j]), s.lam_n, theta)
        out[2 * j] = lo
        out[2 * j + 1] = hi
    return out


def admissible_upper(method: str, sigma1: float, lam_n: float) -> float:
    """Supremum of the theta range with spectral radius < 1."""
    _check_method(method)
    if sigma1 <= 0.0:
        return 2.0
    if method in _G3_FAMILY:
        root = math.sqrt(lam_n)
        return 2.0 * root / (root + sigma1)
    return 2.0 * lam_n / (lam_n + sigma1 * sigma1)


def optimal_theta(method: str, sigma1: float, lam_n: float) -> float:
    """Rate-optimal relaxation parameter for each scheme."""
    _check_method(method)
    if sigma1 <= 0.0:
        return 1.0
    if method == PDFP2:
        return lam_n / (lam_n + sigma1 * sigma1)
    if method in _G3_FAMILY:
        return theta_bar(sigma1, lam_n)
    return 2.0 * lam_n / (2.0 * lam_n + sigma1 * sigma1)


def optimal_rate(method: str, sigma1: float, lam_n: float) -> float:
    """Spectral radius at the optimal theta."""
    _check_method(method)
    if sigma1 <= 0.0:
        return 0.0
    if method == PDFP2:
        return sigma1 / math.sqrt(lam_n + sigma1 * sigma1)
    if method in _G3_FAMILY:
        return 1.0 - theta_bar(sigma1, lam_n)
    return sigma1 * sigma1 / (2.0 * lam_n + sigma1 * sigma1)


def rho_theory(method: str, theta: float, sigma1: float, lam_n: float) -> float:
    """Spectral radius of the method's iteration matrix at a given theta."""
    _check_method(method)
    if sigma1 <= 0.0:
        return abs(1.0 - theta)
    if method == PDFP2:
        return math.hypot(1.0 - theta, theta * sigma1 / math.sqrt(lam_n))
    if method in _G3_FAMILY:
        tb = theta_bar(sigma1, lam_n)
        if theta <= tb:
            return abs(1.0 - theta)
        dj = theta * theta * sigma1 * sigma1 - 4.0 * (1.0 - theta) * lam_n
        return (
            theta * sigma1 * math.sqrt(dj)
            + theta * theta * sigma1 * sigma1
            - 2.0 * (1.0 - theta) * lam_n
        ) / (2.0 * lam_n)
    return max(abs(1.0 - theta * (1.0 + sigma1 * sigma1 / lam_n)), abs(1.0 - theta))


@dataclass(frozen=True)
class RateReport:
    method: str
    theta: float
    spectral_radius: float
    optimal_theta: float
    optimal_rate: float
    admissible_upper: float


def rate_report(s: SpectralInfo, method: str, theta: float) -> RateReport:
    """Theory summary for one method at one theta. A theta outside the
    admissible range simply reports a radius >= 1."""
    if not theta > 0.0:
        raise ValueError("theta must be positive")
    s1 = s.sigma1
    return RateReport(
        method=method,
        theta=float(theta),
        spectral_radius=rho_theory(method, theta, s1, s.lam_n),
        optimal_theta=optimal_theta(method, s1, s.lam_n),
        optimal_rate=optimal_rate(method, s1, s.lam_n),
        admissible_upper=admissible_upper(method, s1, s.lam_n),
    )


def sort_spectrum(eigs) -> np.ndarray:
    """Lexicographic (re, im) ordering used for multiset comparison."""
    eigs = np.asarray(eigs, dtype=np.complex128)
    order = np.lexsort((eigs.imag, eigs.real))
    return eigs[order]


def spectrum_distance(e1, e2) -> float:
    """Multiset distance between two spectra: lexicographic sort, then each
    eigenvalue of the first is paired with the nearest unused eigenvalue of
    the second (plain sorted pairing misorders conjugate pairs whose real
    parts only differ by rounding noise)."""
    e1 = sort_spectrum(e1)
    e2 = sort_spectrum(e2)
    if e1.shape != e2.shape:
        raise ValueError(f"spectra of different sizes: {e1.shape} vs {e2.shape}")
    if e1.size == 0:
        return 0.0
    remaining = e2.copy()
    alive = np.ones(e2.size, dtype=bool)
    worst = 0.0
    for v in e1:
        idx_alive = np.flatnonzero(alive)
        gaps = np.abs(remaining[idx_alive] - v)
        pick = idx_alive[int(np.argmin(gaps))]
        worst = max(worst, float(np.abs(remaining[pick] - v)))
        alive[pick] = False
    return worst


def _check_method(method: str):
    if method not in FIXED_POINT_METHODS:
        raise ValueError(f"unknown fixed-point method {method!r}")
