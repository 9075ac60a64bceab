"""Problem files, seeded generation, and trace/report serialization.

Problem file format (UTF-8, LF):

    # d n m lambda
    <row 1 of A: N comma-separated entries>
    ...
    <row d of A>
    <y: N comma-separated entries>

Floats are written with shortest round-trip precision, so save -> load is
bit-exact.

Random problems use an own splitmix64 generator rather than the platform
RNG so fixtures are reproducible across numpy versions and languages.
The raw stream is counter-based: output_k = mix64(seed + (k+1) * GOLDEN)
with GOLDEN = 0x9E3779B97F4A7C15 and the standard mix constants
0xBF58476D1CE4E5B9 / 0x94D049BB133111EB. Test vectors (seed 0):
0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F.
Uniforms take the top 53 bits; normals use the Marsaglia polar transform
with an in-house log (frexp plus a fixed-length atanh series) so every
operation is an IEEE-754 basic op and the byte stream is platform-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .problem import RidgeProblem
from .solvers import ConvergenceTrace

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)

STANDARD_NORMAL = "normal"
UNIFORM01 = "uniform"

_LN2 = 0.6931471805599453


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _ln_deterministic(x: np.ndarray) -> np.ndarray:
    """Natural log on (0, 1] using only IEEE basic operations.

    frexp is exact; on the mantissa m in [0.5, 1) we evaluate the atanh
    series 2 sum z^(2i+1)/(2i+1), z = (m-1)/(m+1), |z| <= 1/3, truncated at
    a fixed 17 terms (tail < 4e-17 relative).
    """
    m, e = np.frexp(x)
    z = (m - 1.0) / (m + 1.0)
    z2 = z * z
    acc = np.full_like(z, 1.0 / 33.0)
    for k in range(15, 0, -1):
        acc = acc * z2 + 1.0 / (2 * k + 1)
    ln_m = 2.0 * z * (1.0 + z2 * acc)
    return ln_m + e * _LN2


class SplitMix64:
    """Deterministic counter-based 64-bit stream with batch helpers."""

    def __init__(self, seed: int):
        self._seed = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
        self._count = 0

    def next_u64(self) -> int:
        return int(self.raw(1)[0])

    def raw(self, k: int) -> np.ndarray:
        idx = np.arange(self._count + 1, self._count + k + 1, dtype=np.uint64)
        self._count += k
        with np.errstate(over="ignore"):
            return _mix64(self._seed + idx * GOLDEN)

    def uniform01(self, k: int) -> np.ndarray:
        """k doubles in [0, 1) with 53-bit resolution."""
        return (self.raw(k) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53

    def standard_normal(self, k: int) -> np.ndarray:
        """k standard normal deviates via the polar method."""
        out = np.empty(k)
        filled = 0
        while filled < k:
            want = max(k - filled, 64)
            pairs = (want + 1) // 2 + 8
            u = 2.0 * self.uniform01(pairs) - 1.0
            v = 2.0 * self.uniform01(pairs) - 1.0
            s = u * u + v * v
            ok = (s > 0.0) & (s < 1.0)
            u, v, s = u[ok], v[ok], s[ok]
            if s.size == 0:
                continue
            scale = np.sqrt(-2.0 * _ln_deterministic(s) / s)
            block = np.empty(2 * s.size)
            block[0::2] = u * scale
            block[1::2] = v * scale
            take = min(block.size, k - filled)
            out[filled : filled + take] = block[:take]
            filled += take
        return out


@dataclass(frozen=True)
class GeneratorSpec:
    """Seeded random-problem description."""

    d: int
    n: int
    m: int = 1
    lam: float = 1.0
    seed: int = 0
    distribution: str = STANDARD_NORMAL

    def __post_init__(self):
        if self.d < 1 or self.n < 1 or self.m < 1:
            raise ValueError("dimensions must be positive")
        if not self.lam > 0.0:
            raise ValueError("lambda must be positive")
        if self.distribution not in (STANDARD_NORMAL, UNIFORM01):
            raise ValueError(f"unknown distribution {self.distribution!r}")


def generate_problem(spec: GeneratorSpec) -> RidgeProblem:
    """Deterministic problem for a spec: A entries row-major first, then y."""
    rng = SplitMix64(spec.seed)
    big_n = spec.n * spec.m
    draw = rng.standard_normal if spec.distribution == STANDARD_NORMAL else rng.uniform01
    a = draw(spec.d * big_n).reshape(spec.d, big_n)
    y = draw(big_n)
    return RidgeProblem(a=a, y=y, lam=spec.lam, n=spec.n, m=spec.m)


def _fmt(x: float) -> str:
    return repr(float(x))


def save_problem(problem: RidgeProblem, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# {problem.d} {problem.n} {problem.m} {_fmt(problem.lam)}\n")
        for row in problem.a:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
        fh.write(",".join(_fmt(v) for v in problem.y) + "\n")


class ProblemFormatError(ValueError):
    """Malformed problem file; the message carries the offending line."""


def _parse_row(text: str, lineno: int, expected: int, path) -> np.ndarray:
    tokens = [t.strip() for t in text.split(",")]
    try:
        values = np.array([float(t) for t in tokens])
    except ValueError as exc:
        raise ProblemFormatError(f"{path}:{lineno}: unparseable number ({exc})") from None
    if values.shape[0] != expected:
        raise ProblemFormatError(
            f"{path}:{lineno}: expected {expected} entries, found {values.shape[0]}"
        )
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0]) + 1
        raise ProblemFormatError(f"{path}:{lineno}: non-finite entry at column {bad}")
    return values


def load_problem(path) -> RidgeProblem:
    """Parse and validate a problem file; errors carry line numbers."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    lines = [ln for ln in lines if ln.strip() != ""]
    if not lines or not lines[0].lstrip().startswith("#"):
        raise ProblemFormatError(f"{path}:1: missing '# d n m lambda' header")
    header = lines[0].lstrip()[1:].split()
    if len(header) != 4:
        raise ProblemFormatError(f"{path}:1: header needs 'd n m lambda', got {lines[0]!r}")
    try:
        d, n, m = (int(t) for t in header[:3])
        lam = float(header[3])
    except ValueError as exc:
        raise ProblemFormatError(f"{path}:1: bad header value ({exc})") from None
    big_n = n * m
    data = lines[1:]
    if len(data) != d + 1:
        raise ProblemFormatError(
            f"{path}: expected {d} matrix rows plus one response row, found {len(data)} data rows"
        )
    a = np.empty((d, big_n))
    for i, text in enumerate(data[:d]):
        a[i] = _parse_row(text, i + 2, big_n, path)
    y = _parse_row(data[d], d + 2, big_n, path)
    try:
        return RidgeProblem(a=a, y=y, lam=lam, n=n, m=m)
    except ValueError as exc:
        raise ProblemFormatError(f"{path}: {exc}") from None


def write_trace(trace: ConvergenceTrace, path) -> None:
    """Trace CSV: header k,gap,dist,step_residual,rate_estimate, one row per
    iteration, shortest round-trip float formatting."""
    if len(trace) == 0:
        raise ValueError("refusing to write an empty trace")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("k,gap,dist,step_residual,rate_estimate\n")
        for i in range(len(trace)):
            fh.write(
                f"{trace.k[i]},{_fmt(trace.gap[i])},{_fmt(trace.dist[i])},"
                f"{_fmt(trace.step_residual[i])},{_fmt(trace.rate_estimate[i])}\n"
            )


def read_trace(path) -> ConvergenceTrace:
    trace = ConvergenceTrace()
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "k,gap,dist,step_residual,rate_estimate":
            raise ValueError(f"{path}: unexpected trace header {header!r}")
        for line in fh:
            if not line.strip():
                continue
            k, gap, dist, res, rate = line.strip().split(",")
            trace.append(int(k), float(gap), float(dist), float(res), float(rate))
    return trace


def _json_num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def solver_report(method, theta, rho_theory, rho_empirical, iterations,
                  kappa, factors, cost_per_iter, status=None) -> dict:
    """JSON-ready report object (the CLI's stdout schema)."""
    report = {
        "method": method,
        "theta": _json_num(theta),
        "rho_theory": _json_num(rho_theory),
        "rho_empirical": _json_num(rho_empirical),
        "iterations": int(iterations),
        "kappa": _json_num(kappa),
        "factors": {
            "pdfp1": _json_num(factors[0]),
            "pdfp2": _json_num(factors[1]),
            "qtz": _json_num(factors[2]),
        } if factors is not None else None,
        "cost_per_iter": int(cost_per_iter) if cost_per_iter is not None else None,
    }
    if status is not None:
        report["status"] = status
    return report
