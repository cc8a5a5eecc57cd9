"""L^2 harmonic forms: the volume and middle-degree integral tests.

Whether an improper integral converges is read off the profile's declared
large-``t`` behaviour of ``g`` (no finite quadrature can certify
divergence).  Quadrature only supplies finite parts and values, with an
analytic bound on the discarded tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, UndefinedError
from .metric import EXPONENTIAL_DECAY, EXPONENTIAL_GROWTH, POWER, MetricProfile, eval_profile
from .quadrature import adaptive_simpson

CONVERGENT = "convergent"
DIVERGENT = "divergent"
INCONCLUSIVE = "inconclusive"

TRIVIAL = "trivial"
ONE_DIMENSIONAL = "one_dimensional"
INFINITE_DIMENSIONAL = "infinite_dimensional"

CONSTANT = "constant"

QUAD_TOL = 1e-10
TAIL_CUTOFF = 40.0
DIVERGENT_WINDOW = 10.0
HALVING_TOL = 1e-6
# start of the volume integral; the skipped piece is O(start^N)
ORIGIN_OFFSET = 1e-12


@dataclass(frozen=True)
class IntegralVerdict:
    kind: str
    tail_class: str
    finite_part: Optional[float]
    lower: Optional[float]
    upper: Optional[float]
    value: Optional[float] = None
    tail_bound: float = 0.0
    note: str = ""

    @property
    def convergent(self) -> bool:
        return self.kind == CONVERGENT


def _classify_tail(profile: MetricProfile, g_power: float) -> tuple[str, str, float]:
    """(kind, tail class, decay rate or power exponent) of ``f^{1/2} g^{g_power}``."""
    tail = profile.g_tail
    if profile.certified:
        tail = EXPONENTIAL_GROWTH
    if tail == EXPONENTIAL_GROWTH:
        rate = (profile.g_tail_rate or 2.0) * g_power
        if rate > 0:
            return DIVERGENT, EXPONENTIAL_GROWTH, rate
        return CONVERGENT, EXPONENTIAL_DECAY, -rate
    if tail == EXPONENTIAL_DECAY:
        rate = -profile.g_tail_rate * g_power
        if rate > 0:
            return DIVERGENT, EXPONENTIAL_GROWTH, rate
        return CONVERGENT, EXPONENTIAL_DECAY, -rate
    if tail == POWER:
        s = profile.g_tail_rate * g_power
        if s < -1:
            return CONVERGENT, POWER, s
        return DIVERGENT, CONSTANT if s == 0 else POWER, s
    return INCONCLUSIVE, "unknown", 0.0


def _integrand(profile: MetricProfile, g_power: float):
    def fn(t: float) -> float:
        f, _, _, g, _, _ = eval_profile(profile, t)
        return math.sqrt(f) * g**g_power

    return fn


def _tail_bound(fn, tail_class: str, param: float, T: float) -> float:
    ts = np.linspace(T / 2, T, 33)
    vals = np.array([fn(t) for t in ts])
    if tail_class == EXPONENTIAL_DECAY:
        K = float(np.max(vals * np.exp(param * ts)))
        return 2.0 * K * math.exp(-param * T) / param
    K = float(np.max(vals / ts**param))
    return 2.0 * K * T ** (param + 1) / (-param - 1)


def _improper_integral(profile: MetricProfile, g_power: float, start: float, T: float) -> IntegralVerdict:
    kind, tail_class, param = _classify_tail(profile, g_power)
    fn = _integrand(profile, g_power)
    if kind == INCONCLUSIVE:
        return IntegralVerdict(INCONCLUSIVE, tail_class, None, None, None, note="large-t behaviour of g not declared")
    if kind == DIVERGENT:
        end = start + DIVERGENT_WINDOW
        # informational only; relative accuracy suffices
        scale = max(abs(fn(end)), abs(fn(start)), 1.0)
        part = adaptive_simpson(fn, start, end, QUAD_TOL * scale)
        return IntegralVerdict(DIVERGENT, tail_class, part, part, math.inf, note=f"finite part over [{start:g}, {end:g}]")
    part = adaptive_simpson(fn, start, T, QUAD_TOL)
    half = adaptive_simpson(fn, start, 0.5 * T, QUAD_TOL)
    bound = _tail_bound(fn, tail_class, param, T)
    if abs(part - half) > max(HALVING_TOL, bound):
        kind = INCONCLUSIVE
    # the enclosure also absorbs the quadrature tolerance
    lower, upper = part - QUAD_TOL, part + bound + QUAD_TOL
    return IntegralVerdict(kind, tail_class, part, lower, upper, value=part + 0.5 * bound, tail_bound=bound)


def volume_integral(profile: MetricProfile, N: int, cutoff: float = TAIL_CUTOFF) -> IntegralVerdict:
    """Classify ``int_0^inf f^{1/2} g^{(N-1)/2}`` (the volume of ``M``)."""
    if N < 2:
        raise DomainError("N must be at least 2")
    return _improper_integral(profile, (N - 1) / 2.0, ORIGIN_OFFSET, cutoff)


def middle_integral(profile: MetricProfile, cutoff: float = TAIL_CUTOFF) -> IntegralVerdict:
    """Classify ``int_1^inf f^{1/2} g^{-1/2}``."""
    return _improper_integral(profile, -0.5, 1.0, cutoff)


def conformal_radius(profile: MetricProfile, cutoff: float = TAIL_CUTOFF) -> float:
    """Radius ``exp(int_1^inf g^{-1/2} f^{1/2})`` of the conformally equivalent ball."""
    verdict = middle_integral(profile, cutoff)
    if not verdict.convergent:
        raise UndefinedError(f"middle integral is {verdict.kind}; conformal radius undefined")
    return math.exp(verdict.value)


@dataclass(frozen=True)
class HarmonicReport:
    N: int
    p: int
    profile: str
    classification: str
    volume_integral: IntegralVerdict
    middle_integral: IntegralVerdict
    conformal_radius: Optional[float]
    zero_in_point_spectrum: bool
    zero_in_essential_spectrum: bool


def classify_harmonic(profile: MetricProfile, N: int, p: int) -> HarmonicReport:
    """Dimension class of the space of L^2 harmonic ``p``-forms."""
    if N < 2 or not 0 <= p <= N:
        raise DomainError(f"need N >= 2 and 0 <= p <= N, got N={N}, p={p}")
    vol = volume_integral(profile, N)
    mid = middle_integral(profile)
    radius = None
    if p in (0, N):
        decisive = vol
        nontrivial = ONE_DIMENSIONAL
    elif 2 * p == N:
        decisive = mid
        nontrivial = INFINITE_DIMENSIONAL
        if mid.convergent:
            radius = math.exp(mid.value)
    else:
        decisive = None
        nontrivial = TRIVIAL
    if decisive is None:
        cls = TRIVIAL
    elif decisive.kind == INCONCLUSIVE:
        cls = INCONCLUSIVE
    else:
        cls = nontrivial if decisive.convergent else TRIVIAL
    return HarmonicReport(
        N=N,
        p=p,
        profile=profile.label(),
        classification=cls,
        volume_integral=vol,
        middle_integral=mid,
        conformal_radius=radius,
        zero_in_point_spectrum=cls in (ONE_DIMENSIONAL, INFINITE_DIMENSIONAL),
        zero_in_essential_spectrum=cls == INFINITE_DIMENSIONAL,
    )
