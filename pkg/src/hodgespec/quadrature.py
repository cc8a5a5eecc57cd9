"""Adaptive Simpson quadrature on finite intervals."""

from __future__ import annotations

from typing import Callable

from .errors import EvaluationError


def adaptive_simpson(fn: Callable[[float], float], a: float, b: float, tol: float = 1e-10, max_depth: int = 60) -> float:
    """Integrate ``fn`` over ``[a, b]`` to absolute tolerance ``tol``.

    Uses an explicit stack and the usual Richardson correction
    ``(S2 - S1) / 15`` on accepted panels.
    """
    if b == a:
        return 0.0
    if b < a:
        return -adaptive_simpson(fn, b, a, tol, max_depth)
    fa, fb = fn(a), fn(b)
    m = 0.5 * (a + b)
    fm = fn(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, s, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = fn(lm), fn(rm)
        left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        delta = left + right - s
        if abs(delta) <= 15.0 * eps or depth >= max_depth:
            total += left + right + delta / 15.0
        else:
            stack.append((lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1))
            stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1))
    if total != total:
        raise EvaluationError("quadrature produced NaN")
    return total
