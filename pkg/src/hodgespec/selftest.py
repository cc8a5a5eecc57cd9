"""Built-in oracle checks run by ``hodgespec selftest``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .discretize import Grid, TridiagonalSym, assemble
from .eigensolve import bisect_eigenvalues, jacobi_eigenvalues, smallest_eigenvalues_banded
from .errors import DomainError
from .harmonic import middle_integral
from .metric import MetricProfile, hyperbolic_profile
from .reduction import AS_PRINTED, Channel, build_radial_operator, potential_w1
from .sphere_modes import coclosed_eigenvalues

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    error: float
    detail: str = ""


def _tridiagonal_vs_jacobi(tol, rng, **_):
    worst = 0.0
    for _ in range(5):
        T = TridiagonalSym(rng.normal(size=30), rng.normal(size=29))
        ref = jacobi_eigenvalues(T.to_dense())
        got = np.array(bisect_eigenvalues(T, 1, T.n, tol / 10))
        worst = max(worst, float(np.max(np.abs(got - ref))))
    return worst, ""


def _banded_vs_jacobi(tol, **_):
    op = build_radial_operator(hyperbolic_profile(), Channel("III", 5, 2, 4.0), 1.0)
    B = assemble(op, Grid(1.0, 4.0, 30))
    ref = jacobi_eigenvalues(B.to_dense())
    got = np.array(smallest_eigenvalues_banded(B, 8, tol / 10))
    return float(np.max(np.abs(got - ref[:8]))), ""


def _middle_integral_closed_form(tol, **_):
    value = middle_integral(hyperbolic_profile()).value
    return abs(value + math.log(math.tanh(0.5))), ""


def _potential_collapse(tol, **_):
    t = np.linspace(0.5, 30.0, 60)
    q = potential_w1(hyperbolic_profile(), 3, 0, 0.0, t)
    return float(np.max(np.abs(q - 1.0))), ""


def _sphere_spectrum(tol, **_):
    got = [m.lam for m in coclosed_eigenvalues(4, 1, 3)]
    return float(np.max(np.abs(np.array(got) - [4.0, 9.0, 16.0]))), ""


def _duality(tol, profile, w2_variant, **_):
    if not profile.f_is_one:
        return None, f"profile {profile.label()} has f != 1"
    worst = 0.0
    grid = Grid(1.0, 5.0, 40)
    lam = 3.0
    for N, p in ((4, 1), (5, 2), (6, 2)):
        A = assemble(build_radial_operator(profile, Channel("II", N, p, lam), 1.0, w2_variant), grid)
        B = assemble(build_radial_operator(profile, Channel("I", N, N - p, lam), 1.0), grid)
        worst = max(worst, float(np.max(np.abs(A.diag - B.diag))), float(np.max(np.abs(A.off - B.off), initial=0.0)))
    return worst, ""


CHECKS: tuple[tuple[str, Callable], ...] = (
    ("sturm bisection vs jacobi", _tridiagonal_vs_jacobi),
    ("banded inertia vs jacobi", _banded_vs_jacobi),
    ("middle integral closed form", _middle_integral_closed_form),
    ("type I potential collapse", _potential_collapse),
    ("sphere coclosed spectrum", _sphere_spectrum),
    ("degree duality of channels I and II", _duality),
)


def run_selftest(
    tol: float = 1e-9, profile: MetricProfile | None = None, w2_variant: str = AS_PRINTED, seed: int = 0
) -> list[CheckResult]:
    if not tol > 0:
        raise DomainError("selftest tolerance must be positive")
    profile = profile or hyperbolic_profile()
    rng = np.random.default_rng(seed)
    out = []
    for name, check in CHECKS:
        err, detail = check(tol=tol, rng=rng, profile=profile, w2_variant=w2_variant)
        if err is None:
            out.append(CheckResult(name, SKIPPED, math.nan, detail))
        else:
            out.append(CheckResult(name, PASS if err <= tol else FAIL, err, detail))
    return out
