import pathlib

import numpy as np
import pytest

from ridgefp import RidgeProblem
from ridgefp.io import GeneratorSpec, generate_problem

REPO_ROOT = pathlib.Path(__file__).resolve().parent.parent
WORKED_FIXTURE = REPO_ROOT / "fixtures" / "worked.csv"


def worked_problem() -> RidgeProblem:
    """2x2 instance with sigma = (2, 1), lambda*n = 1; solution
    w* = (1/2, 2/5), alpha* = (1/2, 1/5)."""
    return RidgeProblem(a=np.diag([1.0, 2.0]), y=np.array([1.0, 1.0]), lam=0.5, n=2, m=1)


def seeded_problem(seed, d, n, m=1, lam=None, sigma1=None) -> RidgeProblem:
    """Deterministic random instance; lam defaults to 1/n, and sigma1 (when
    given) rescales A to hit a target top singular value."""
    lam = 1.0 / n if lam is None else lam
    problem = generate_problem(GeneratorSpec(d=d, n=n, m=m, lam=lam, seed=seed))
    if sigma1 is not None:
        top = np.linalg.svd(problem.a, compute_uv=False)[0]
        problem = RidgeProblem(a=problem.a * (sigma1 / top), y=problem.y, lam=lam, n=n, m=m)
    return problem


@pytest.fixture
def worked() -> RidgeProblem:
    return worked_problem()
