"""Warped-product metric profiles ``f(t) dt^2 + g(t) dtheta^2``.

A profile bundles closed-form coefficient maps with hand-coded first and
second derivatives.  Asymptotically hyperbolic profiles are written as
``f = 1 + f~`` and ``g = sinh^2 t + g~`` and keep the perturbation parts
separately, so decay checks never subtract two numbers of size ``e^{2t}``.

All maps accept a float or a numpy array and are vectorised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import ConstructionError, DomainError, EvaluationError

Triple = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]

EXACTLY_HYPERBOLIC = "exactly_hyperbolic"
DECAY_CERTIFIED = "decay_certified"
UNCERTIFIED = "uncertified"
ASYMPTOTIC_CLASSES = (EXACTLY_HYPERBOLIC, DECAY_CERTIFIED, UNCERTIFIED)

# Large-t behaviour of g, consumed by the harmonic module.
EXPONENTIAL_GROWTH = "exponential_growth"
EXPONENTIAL_DECAY = "exponential_decay"
POWER = "power"
UNKNOWN = "unknown"

# Derivative factor in the certified decay constant of ``perturbed_profile``:
# t|a/(1+t)|, t|a/(1+t)^2| and t|2a/(1+t)^3| are all below |a| for t > 0.
PERTURBED_DECAY_FACTOR = 2.0


def _hyperbolic_parts(t):
    s = np.sinh(t)
    return s * s, np.sinh(2.0 * t), 2.0 * np.cosh(2.0 * t)


def _zero_parts(t):
    z = np.zeros_like(np.asarray(t, dtype=float))
    return z, z, z


@dataclass(frozen=True)
class MetricProfile:
    """Closed-form warped-product profile with exact derivatives.

    ``f_parts`` and ``g_parts`` return ``(value, first, second)`` derivative
    triples.  When ``f_tilde``/``g_tilde`` are given they return the same
    triples for the perturbation away from the hyperbolic metric.
    """

    name: str
    f_parts: Triple
    g_parts: Triple
    asymptotic_class: str = UNCERTIFIED
    decay_constant: float = 0.0
    decay_onset: float = 1.0
    near_zero_model: bool = False
    near_zero_eps: float = 0.0
    f_tilde: Optional[Triple] = None
    g_tilde: Optional[Triple] = None
    g_tail: str = UNKNOWN
    g_tail_rate: float = 0.0
    f_is_one: bool = False
    params: tuple[tuple[str, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.asymptotic_class not in ASYMPTOTIC_CLASSES:
            raise ConstructionError(f"unknown asymptotic class {self.asymptotic_class!r}")
        if self.near_zero_model and not self.near_zero_eps > 0:
            raise ConstructionError("near_zero_model requires near_zero_eps > 0")

    def f(self, t):
        return self.f_parts(t)[0]

    def df(self, t):
        return self.f_parts(t)[1]

    def d2f(self, t):
        return self.f_parts(t)[2]

    def g(self, t):
        return self.g_parts(t)[0]

    def dg(self, t):
        return self.g_parts(t)[1]

    def d2g(self, t):
        return self.g_parts(t)[2]

    @property
    def certified(self) -> bool:
        return self.asymptotic_class != UNCERTIFIED

    def label(self) -> str:
        if not self.params:
            return self.name
        args = ",".join(f"{k}={v:g}" for k, v in self.params)
        return f"{self.name}({args})"


def _check_positive_t(t) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"profile evaluated at t <= 0 or non-finite t: {t!r}")
    return arr


def eval_profile(profile: MetricProfile, t):
    """Return ``(f, f', f'', g, g', g'')`` at ``t > 0``."""
    arr = _check_positive_t(t)
    f, df, d2f = profile.f_parts(arr)
    g, dg, d2g = profile.g_parts(arr)
    out = tuple(np.broadcast_to(np.asarray(v, dtype=float), arr.shape) for v in (f, df, d2f, g, dg, d2g))
    if arr.ndim == 0:
        return tuple(float(v) for v in out)
    return out


def asymptotically_hyperbolic_profile(
    name: str,
    f_tilde: Optional[Triple] = None,
    g_tilde: Optional[Triple] = None,
    *,
    asymptotic_class: str = UNCERTIFIED,
    decay_constant: float = 0.0,
    decay_onset: float = 1.0,
    near_zero_model: bool = False,
    near_zero_eps: float = 0.0,
    params: tuple[tuple[str, float], ...] = (),
) -> MetricProfile:
    """Build ``f = 1 + f~``, ``g = sinh^2 t + g~`` from perturbation triples."""
    ft = f_tilde or _zero_parts
    gt = g_tilde or _zero_parts

    def f_parts(t):
        v, d, dd = ft(t)
        return 1.0 + v, d, dd

    def g_parts(t):
        h0, h1, h2 = _hyperbolic_parts(t)
        v, d, dd = gt(t)
        return h0 + v, h1 + d, h2 + dd

    return MetricProfile(
        name=name,
        f_parts=f_parts,
        g_parts=g_parts,
        asymptotic_class=asymptotic_class,
        decay_constant=decay_constant,
        decay_onset=decay_onset,
        near_zero_model=near_zero_model,
        near_zero_eps=near_zero_eps,
        f_tilde=ft,
        g_tilde=gt,
        g_tail=EXPONENTIAL_GROWTH,
        g_tail_rate=2.0,
        f_is_one=f_tilde is None,
        params=params,
    )


def hyperbolic_profile() -> MetricProfile:
    """The hyperbolic metric ``dt^2 + sinh^2 t dtheta^2``."""
    return MetricProfile(
        name="hyperbolic",
        f_parts=lambda t: (np.ones_like(np.asarray(t, dtype=float)), *_zero_parts(t)[:2]),
        g_parts=_hyperbolic_parts,
        asymptotic_class=EXACTLY_HYPERBOLIC,
        decay_constant=0.0,
        decay_onset=1.0,
        f_tilde=_zero_parts,
        g_tilde=_zero_parts,
        g_tail=EXPONENTIAL_GROWTH,
        g_tail_rate=2.0,
        f_is_one=True,
    )


def _inverse_shift_parts(coeff: float) -> Triple:
    # coeff/(1+t) with its two derivatives
    def parts(t):
        u = 1.0 / (1.0 + np.asarray(t, dtype=float))
        return coeff * u, -coeff * u * u, 2.0 * coeff * u**3

    return parts


def perturbed_profile(alpha: float, beta: float) -> MetricProfile:
    """``f = 1 + alpha/(1+t)``, ``g = sinh^2 t + beta/(1+t)``.

    Positivity on ``(0, inf)`` needs ``alpha >= -1`` and ``beta >= 0``
    (as ``t -> 0`` the sinh term vanishes and ``g -> beta``).
    """
    alpha = float(alpha)
    beta = float(beta)
    if not (math.isfinite(alpha) and math.isfinite(beta)):
        raise ConstructionError("perturbed profile parameters must be finite")
    if alpha < -1.0:
        raise ConstructionError(f"alpha={alpha} makes f nonpositive near t=0")
    if beta < 0.0:
        raise ConstructionError(f"beta={beta} makes g negative near t=0")
    if alpha == 0.0 and beta == 0.0:
        return replace(hyperbolic_profile(), name="perturbed", params=(("alpha", 0.0), ("beta", 0.0)))
    return asymptotically_hyperbolic_profile(
        "perturbed",
        f_tilde=_inverse_shift_parts(alpha) if alpha != 0.0 else None,
        g_tilde=_inverse_shift_parts(beta) if beta != 0.0 else None,
        asymptotic_class=DECAY_CERTIFIED,
        decay_constant=max(abs(alpha), abs(beta)) * PERTURBED_DECAY_FACTOR,
        decay_onset=1.0,
        params=(("alpha", alpha), ("beta", beta)),
    )


@dataclass(frozen=True)
class DecayReport:
    """Worst sampled values of ``t |.|`` for the six perturbation maps."""

    t0: float
    t_check: float
    constant: float
    maxima: dict[str, float]
    passed: bool
    witness_t: float
    witness_quantity: str


_DECAY_NAMES = ("g~", "g~'", "g~''", "f~", "f~'", "f~''")


def check_decay(profile: MetricProfile, t0: float, C: float, sample_count: int = 200) -> DecayReport:
    """Sample ``t|g~|, t|g~'|, t|g~''|, t|f~|, t|f~'|, t|f~''|`` on ``[t0, 100 t0]``.

    Passes iff every maximum is at most ``C``.  Sampling is log-spaced; the
    result is evidence, not proof.
    """
    if not t0 > 0:
        raise DomainError("t0 must be positive")
    if not C > 0:
        raise DomainError("C must be positive")
    if sample_count < 2:
        raise DomainError("sample_count must be at least 2")
    t = np.geomspace(t0, 100.0 * t0, sample_count)
    if profile.f_tilde is not None and profile.g_tilde is not None:
        gt = profile.g_tilde(t)
        ft = profile.f_tilde(t)
    else:
        f, df, d2f, g, dg, d2g = eval_profile(profile, t)
        h0, h1, h2 = _hyperbolic_parts(t)
        gt = (g - h0, dg - h1, d2g - h2)
        ft = (f - 1.0, df, d2f)
    values = [np.broadcast_to(np.asarray(v, dtype=float), t.shape) for v in (*gt, *ft)]
    for name, v in zip(_DECAY_NAMES, values):
        if not np.all(np.isfinite(v)):
            raise EvaluationError(f"non-finite {name} on the decay sample grid of {profile.label()}")
    ratios = [t * np.abs(v) for v in values]
    maxima = {name: float(r.max()) for name, r in zip(_DECAY_NAMES, ratios)}
    worst = max(range(6), key=lambda i: ratios[i].max() / C)
    idx = int(np.argmax(ratios[worst]))
    return DecayReport(
        t0=float(t0),
        t_check=float(t[-1]),
        constant=float(C),
        maxima=maxima,
        passed=all(m <= C for m in maxima.values()),
        witness_t=float(t[idx]),
        witness_quantity=_DECAY_NAMES[worst],
    )


def check_invariants(profile: MetricProfile, samples: Optional[np.ndarray] = None) -> list[str]:
    """Return human-readable violations of the profile invariants (empty if none)."""
    problems: list[str] = []
    t = np.geomspace(1e-3, 60.0, 400) if samples is None else np.asarray(samples, dtype=float)
    f, _, _, g, _, _ = eval_profile(profile, t)
    if np.any(f <= 0):
        problems.append(f"f <= 0 at t={t[np.argmax(f <= 0)]:g}")
    if np.any(g <= 0):
        problems.append(f"g <= 0 at t={t[np.argmax(g <= 0)]:g}")
    if profile.near_zero_model:
        tz = np.linspace(profile.near_zero_eps / 100, profile.near_zero_eps * 0.99, 50)
        fz, _, _, gz, _, _ = eval_profile(profile, tz)
        if np.any(fz != 1.0) or np.any(np.abs(gz - tz * tz) > 4 * np.finfo(float).eps * tz * tz):
            problems.append("near_zero_model set but f != 1 or g != t^2 on (0, eps)")
    if profile.certified:
        tl = np.array([10.0, 20.0, 40.0, 80.0])
        fl, _, _, gl, _, _ = eval_profile(profile, tl)
        resid = np.abs(fl - 1.0) + np.abs(gl / np.sinh(tl) ** 2 - 1.0)
        # decay at least like 1/t between t = 10 and t = 80
        if not (resid[-1] <= 0.5 * resid[0] or resid[-1] < 1e-12):
            problems.append("f -> 1 and g/sinh^2 -> 1 not observed on t in [10, 80]")
    return problems


PROFILE_PARAMS: dict[str, tuple[str, ...]] = {
    "hyperbolic": (),
    "perturbed": ("alpha", "beta"),
}


def get_profile(name: str, **params: float) -> MetricProfile:
    """Look up a built-in profile by name; unknown names raise ``ConstructionError``."""
    if name == "hyperbolic":
        return hyperbolic_profile()
    if name == "perturbed":
        return perturbed_profile(params.get("alpha", 0.0), params.get("beta", 0.0))
    raise ConstructionError(f"unknown profile {name!r}; choose from {sorted(PROFILE_PARAMS)}")
