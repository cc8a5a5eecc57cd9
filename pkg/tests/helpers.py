"""Test-only metric profiles."""

import numpy as np

from hodgespec.metric import EXPONENTIAL_DECAY, EXPONENTIAL_GROWTH, POWER, MetricProfile


def _ones(t):
    t = np.asarray(t, dtype=float)
    return np.ones_like(t), np.zeros_like(t), np.zeros_like(t)


def flat_profile(eps=0.5):
    """f = 1, g = t^2 everywhere (Euclidean space); near-zero model holds trivially."""
    return MetricProfile(
        name="flat",
        f_parts=_ones,
        g_parts=lambda t: (np.asarray(t, dtype=float) ** 2, 2 * np.asarray(t, dtype=float), 2 + 0 * np.asarray(t, dtype=float)),
        near_zero_model=True,
        near_zero_eps=eps,
        g_tail=POWER,
        g_tail_rate=2.0,
        f_is_one=True,
    )


def compact_tail_profile():
    """g = sinh^2(t) e^{-4t}, which decays like e^{-2t}/4."""

    def g_parts(t):
        t = np.asarray(t, dtype=float)
        s, c, e = np.sinh(t), np.cosh(t), np.exp(-4 * t)
        g = s * s * e
        dg = (2 * s * c - 4 * s * s) * e
        d2g = (2 * np.cosh(2 * t) - 8 * s * c - 4 * (2 * s * c - 4 * s * s)) * e
        return g, dg, d2g

    return MetricProfile(name="compact", f_parts=_ones, g_parts=g_parts, g_tail=EXPONENTIAL_DECAY, g_tail_rate=2.0, f_is_one=True)


def scaled_hyperbolic(k):
    """f = k^2, g = sinh^2 t; not asymptotically hyperbolic unless k = 1."""

    def f_parts(t):
        t = np.asarray(t, dtype=float)
        return k * k + 0 * t, 0 * t, 0 * t

    def g_parts(t):
        t = np.asarray(t, dtype=float)
        return np.sinh(t) ** 2, np.sinh(2 * t), 2 * np.cosh(2 * t)

    return MetricProfile(name=f"scaled{k}", f_parts=f_parts, g_parts=g_parts, g_tail=EXPONENTIAL_GROWTH, g_tail_rate=2.0)
