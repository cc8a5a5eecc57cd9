"""Half-line Sturm-Liouville reductions of the Hodge Laplacian on p-forms.

For a fixed sphere eigenvalue ``lam`` each channel is unitarily equivalent
to ``-(a w')' + q w`` on ``L^2(c, inf)`` with ``a = 1/f``; channel III is a
2x2 system coupled through a symmetric off-diagonal term.

Potentials are evaluated lazily at whatever points the caller asks for.
Ratios ``g'/g`` and ``g''/g`` are formed before squaring so that large ``t``
does not overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConstructionError, DomainError
from .metric import MetricProfile, eval_profile

CHANNELS = ("I", "II", "III")

AS_PRINTED = "as-printed"
DUAL_CONSISTENT = "dual-consistent"
W2_VARIANTS = (AS_PRINTED, DUAL_CONSISTENT)


@dataclass(frozen=True)
class Channel:
    tag: str
    N: int
    p: int
    lam: float

    def __post_init__(self):
        if self.tag not in CHANNELS:
            raise ConstructionError(f"unknown channel {self.tag!r}")
        if self.N < 2:
            raise ConstructionError(f"N={self.N} must be at least 2")
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise ConstructionError(f"sphere eigenvalue {self.lam} must be finite and >= 0")
        lo, hi = {"I": (0, self.N - 1), "II": (1, self.N), "III": (1, self.N - 1)}[self.tag]
        if not lo <= self.p <= hi:
            raise ConstructionError(f"channel {self.tag} needs {lo} <= p <= {hi}, got p={self.p}")
        if self.tag == "III" and not self.lam > 0:
            raise ConstructionError("channel III requires a positive sphere eigenvalue")

    def limit(self) -> float:
        """Value the potential (or the lower diagonal entry) tends to as ``t -> inf``."""
        if self.tag == "I":
            return ((self.N - 2 * self.p - 1) / 2) ** 2
        if self.tag == "II":
            return ((self.N - 2 * self.p + 1) / 2) ** 2
        return min(((self.N - 2 * self.p - 1) / 2) ** 2, ((self.N - 2 * self.p + 1) / 2) ** 2)


def _unpack(profile: MetricProfile, t):
    f, df, d2f, g, dg, d2g = eval_profile(profile, t)
    return f, df, d2f, g, dg / g, d2g / g


def _f_terms(f, df, d2f):
    return -7.0 / 16.0 * df * df / f**3 + 0.25 * d2f / (f * f)


def potential_w1(profile: MetricProfile, N: int, p: int, lam: float, t):
    """Coefficient of ``w`` in the type-I radial operator (coclosed tangential forms)."""
    if not 0 <= p <= N - 1:
        raise DomainError(f"potential_w1 needs 0 <= p <= N-1, got N={N}, p={p}")
    if lam < 0:
        raise DomainError("sphere eigenvalue must be nonnegative")
    f, df, d2f, g, rg, rgg = _unpack(profile, t)
    a = (N - 2 * p - 1) / 4.0
    b = (N - 2 * p - 5) / 4.0
    return (
        _f_terms(f, df, d2f)
        - 0.5 * df / (f * f) * a * rg
        + a * b * rg * rg / f
        + a * rgg / f
        + lam / g
    )


def potential_w2(profile: MetricProfile, N: int, p: int, lam: float, t, variant: str = AS_PRINTED):
    """Coefficient of ``w`` in the type-II radial operator (closed normal forms).

    ``variant`` selects the factor of the ``f' g'`` cross term:
    ``(N-1+2p)/4`` as printed, or ``(2p-N-1)/4`` which makes the operator
    at degree ``p`` coincide with the type-I operator at degree ``N-p``.
    The two agree whenever ``f' = 0``.
    """
    if not 1 <= p <= N:
        raise DomainError(f"potential_w2 needs 1 <= p <= N, got N={N}, p={p}")
    if lam < 0:
        raise DomainError("sphere eigenvalue must be nonnegative")
    if variant not in W2_VARIANTS:
        raise DomainError(f"unknown w2 cross-term variant {variant!r}")
    f, df, d2f, g, rg, rgg = _unpack(profile, t)
    cross = (N - 1 + 2 * p) / 4.0 if variant == AS_PRINTED else (2 * p - N - 1) / 4.0
    ab = (N - 2 * p + 1) / 4.0 * (N - 2 * p + 5) / 4.0
    c = (-N + 2 * p - 1) / 4.0
    return (
        _f_terms(f, df, d2f)
        - 0.5 * df / (f * f) * cross * rg
        + ab * rg * rg / f
        + c * rgg / f
        + lam / g
    )


def coupling_v3(profile: MetricProfile, lam: float, t):
    """Off-diagonal coupling ``g^{-3/2} f^{-1/2} g' sqrt(lam)`` of the type-III system."""
    if not lam > 0:
        raise DomainError("channel III coupling requires lam > 0")
    f, _, _, g, rg, _ = _unpack(profile, t)
    return rg / np.sqrt(g * f) * math.sqrt(lam)


@dataclass(frozen=True)
class RadialOperator:
    """``-(a w')' + q1 w`` or, with ``q2`` and ``coupling``, the coupled 2x2 system."""

    a: Callable
    q1: Callable
    q2: Optional[Callable] = None
    coupling: Optional[Callable] = None
    domain_start: float = 0.0
    channel: Optional[Channel] = None

    @property
    def coupled(self) -> bool:
        return self.q2 is not None

    def potential_matrix_min(self, t):
        """Pointwise smallest eigenvalue of ``[[q1, c], [c, q2]]`` (or ``q1``)."""
        q1 = np.asarray(self.q1(t), dtype=float)
        if not self.coupled:
            return q1
        q2 = np.asarray(self.q2(t), dtype=float)
        c = np.asarray(self.coupling(t), dtype=float)
        half_gap = 0.5 * (q1 - q2)
        return 0.5 * (q1 + q2) - np.hypot(half_gap, c)


def build_radial_operator(
    profile: MetricProfile,
    channel: Channel,
    domain_start: float = 0.0,
    w2_variant: str = AS_PRINTED,
) -> RadialOperator:
    if w2_variant not in W2_VARIANTS:
        raise ConstructionError(f"unknown w2 cross-term variant {w2_variant!r}")
    if domain_start < 0:
        raise ConstructionError("domain_start must be nonnegative")
    N, p, lam = channel.N, channel.p, channel.lam

    def a(t):
        return 1.0 / np.asarray(eval_profile(profile, t)[0])

    if channel.tag == "I":
        return RadialOperator(a, lambda t: potential_w1(profile, N, p, lam, t), domain_start=domain_start, channel=channel)
    if channel.tag == "II":
        return RadialOperator(
            a, lambda t: potential_w2(profile, N, p, lam, t, w2_variant), domain_start=domain_start, channel=channel
        )
    return RadialOperator(
        a,
        lambda t: potential_w1(profile, N, p, lam, t),
        q2=lambda t: potential_w2(profile, N, p, lam, t, w2_variant),
        coupling=lambda t: coupling_v3(profile, lam, t),
        domain_start=domain_start,
        channel=channel,
    )


def _component(tag: str, component: int) -> int:
    # 1: tangential (type I, first type-III component); 2: normal
    if tag == "I":
        return 1
    if tag == "II":
        return 2
    if tag == "III" and component in (1, 2):
        return component
    raise DomainError(f"bad channel/component: {tag!r}/{component!r}")


def _transform_factor(profile: MetricProfile, N: int, p: int, which: int, t):
    f, _, _, g, _, _ = eval_profile(profile, t)
    if which == 1:
        return f**0.25 * g ** ((N - 2 * p - 1) / 4.0)
    return f**-0.25 * g ** ((N - 2 * p + 1) / 4.0)


def transform_h_to_w(profile: MetricProfile, N: int, p: int, tag: str, t, h, component: int = 1):
    """Map radial coefficients ``h`` of a form to the flat-space function ``w``."""
    return np.asarray(h, dtype=float) * _transform_factor(profile, N, p, _component(tag, component), t)


def transform_w_to_h(profile: MetricProfile, N: int, p: int, tag: str, t, w, component: int = 1):
    """Inverse of :func:`transform_h_to_w`."""
    return np.asarray(w, dtype=float) / _transform_factor(profile, N, p, _component(tag, component), t)


def l2_weight(profile: MetricProfile, N: int, p: int, tag: str, t, component: int = 1):
    """Radial density of the ``L^2`` norm of a form ``h(t) tau``."""
    f, _, _, g, _, _ = eval_profile(profile, t)
    if _component(tag, component) == 1:
        return g ** ((N - 2 * p - 1) / 2.0) * f**0.5
    return g ** ((N - 2 * p + 1) / 2.0) * f**-0.5
