"""Eigenvalue extraction for the assembled symmetric matrices.

Production paths count eigenvalues below a shift (Sturm sequences for
tridiagonal matrices, LDL^T inertia for the bandwidth-2 coupled system) and
bisect on the count.  A cyclic Jacobi solver for small dense matrices is
the independent oracle used in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .discretize import BlockBandedSym, TridiagonalSym
from .errors import DomainError, EvaluationError

EPS = np.finfo(float).eps
PIVOT_FLOOR = 1e-300
RETRY_SHIFT = 1e-12


def jacobi_eigenvalues(A, tol: float = 1e-14, max_sweeps: int = 60) -> np.ndarray:
    """All eigenvalues of a small dense symmetric matrix by cyclic Jacobi rotations."""
    A = np.array(A, dtype=float, copy=True)
    n = A.shape[0]
    if A.shape != (n, n) or not np.allclose(A, A.T, rtol=0, atol=0):
        raise DomainError("jacobi_eigenvalues needs a square symmetric matrix")
    scale = np.linalg.norm(A)
    if n < 2 or scale == 0:
        return np.sort(np.diag(A))
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                col_p = A[:, p].copy()
                col_q = A[:, q]
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :]
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = A[q, p] = 0.0
    else:
        raise EvaluationError("Jacobi iteration did not converge")
    return np.sort(np.diag(A))


def _pivot_guard(scale: float) -> float:
    return max(EPS * scale, PIVOT_FLOOR)


def _sturm_negatives(diag: list, off2: list, mu: float, pivmin: float) -> tuple[int, int]:
    count = 0
    guarded = 0
    q = diag[0] - mu
    if abs(q) < pivmin:
        q = -pivmin
        guarded += 1
    if q < 0:
        count += 1
    for i in range(1, len(diag)):
        q = diag[i] - mu - off2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
            guarded += 1
        if q < 0:
            count += 1
    return count, guarded


class _Sturm:
    def __init__(self, T: TridiagonalSym):
        self.diag = [float(x) for x in T.diag]
        self.off2 = [float(x) * float(x) for x in T.off]
        self.scale = max(map(abs, self.diag), default=0.0) + math.sqrt(max(self.off2, default=0.0))
        self.n = T.n

    def __call__(self, mu: float) -> int:
        return _sturm_negatives(self.diag, self.off2, mu, _pivot_guard(self.scale + abs(mu)))[0]


def sturm_count(T: TridiagonalSym, mu: float) -> int:
    """Number of eigenvalues of ``T`` strictly below ``mu`` (Sturm sign count)."""
    return _Sturm(T)(float(mu))


@dataclass(frozen=True)
class Inertia:
    count: int
    shift: float
    guarded_pivots: int
    retried: bool


def _ldlt_negatives(b0: list, b1: list, b2: list, mu: float, pivmin: float) -> tuple[int, int, bool]:
    # A = L D L^T with unit lower L of bandwidth 2; y = L[i,i-1] * D[i-1]
    count = guarded = 0
    d_prev2 = d_prev = 1.0
    l1_prev = 0.0
    for i in range(len(b0)):
        d = b0[i] - mu
        y = 0.0
        if i >= 2:
            e = b2[i - 2]
            d -= e * e / d_prev2
            y = b1[i - 1] - e * l1_prev
        elif i == 1:
            y = b1[0]
        if i >= 1:
            d -= y * y / d_prev
        if abs(d) < pivmin:
            d = -pivmin
            guarded += 1
        if d < 0:
            count += 1
        l1_prev = y / d_prev
        d_prev2, d_prev = d_prev, d
    return count, guarded, math.isfinite(d_prev) and math.isfinite(l1_prev)


class _Inertia:
    def __init__(self, B: BlockBandedSym):
        b0, b1, b2 = B.bands()
        self.b0 = [float(x) for x in b0]
        self.b1 = [float(x) for x in b1]
        self.b2 = [float(x) for x in b2]
        self.scale = float(np.max(np.abs(b0)) + np.max(np.abs(b1), initial=0.0) + np.max(np.abs(b2), initial=0.0))
        self.n = B.dim

    def detailed(self, mu: float) -> Inertia:
        for shift, retried in ((mu, False), (mu + RETRY_SHIFT, True), (mu - RETRY_SHIFT, True)):
            count, guarded, ok = _ldlt_negatives(self.b0, self.b1, self.b2, shift, _pivot_guard(self.scale + abs(shift)))
            if ok:
                return Inertia(count, shift, guarded, retried)
        raise EvaluationError(f"LDL^T factorisation broke down at mu={mu!r} and both retry shifts")

    def __call__(self, mu: float) -> int:
        return self.detailed(mu).count


def ldlt_inertia(B: BlockBandedSym, mu: float) -> Inertia:
    """Negative-pivot count of ``B - mu I`` with guard and retry metadata."""
    return _Inertia(B).detailed(float(mu))


def inertia_count_banded(B: BlockBandedSym, mu: float) -> int:
    """Number of eigenvalues of ``B`` strictly below ``mu`` (Sylvester inertia)."""
    return ldlt_inertia(B, mu).count


def _bisect(counter, n: int, k_lo: int, k_hi: int, tol: float, lo: float, hi: float) -> list[float]:
    if not 1 <= k_lo <= k_hi <= n:
        raise DomainError(f"need 1 <= k_lo <= k_hi <= {n}, got {k_lo}, {k_hi}")
    if not tol > 0:
        raise DomainError("tol must be positive")
    out = []
    floor = lo
    for k in range(k_lo, k_hi + 1):
        a, b = floor, hi
        # invariant: count(a) < k <= count(b)
        while b - a > tol:
            mid = 0.5 * (a + b)
            if counter(mid) >= k:
                b = mid
            else:
                a = mid
        lam = 0.5 * (a + b)
        out.append(lam)
        floor = a
    return out


def _widen(lo: float, hi: float) -> tuple[float, float]:
    pad = 2 * EPS * max(abs(lo), abs(hi), 1.0)
    return lo - pad, hi + pad


def bisect_eigenvalues(
    T: TridiagonalSym, k_lo: int, k_hi: int, tol: float, bounds: Optional[tuple[float, float]] = None
) -> list[float]:
    """Eigenvalues ``k_lo..k_hi`` (1-based, ascending) of ``T``, each to width ``tol``.

    ``bounds`` may narrow the starting interval; it must contain the
    requested eigenvalues.  Defaults to the Gershgorin interval.
    """
    if T.n == 1 and k_lo == k_hi == 1:
        return [float(T.diag[0])]
    lo, hi = _widen(*(bounds or T.gershgorin()))
    return _bisect(_Sturm(T), T.n, k_lo, k_hi, tol, lo, hi)


def smallest_eigenvalues_banded(
    B: BlockBandedSym, m: int, tol: float, bounds: Optional[tuple[float, float]] = None
) -> list[float]:
    """The ``m`` smallest eigenvalues of the coupled system, by bisection on inertia."""
    lo, hi = _widen(*(bounds or B.gershgorin()))
    return _bisect(_Inertia(B), B.dim, 1, m, tol, lo, hi)


def count_below(matrix: TridiagonalSym | BlockBandedSym, mu: float) -> int:
    if isinstance(matrix, BlockBandedSym):
        return inertia_count_banded(matrix, mu)
    return sturm_count(matrix, mu)


def smallest_eigenvalue(
    matrix: TridiagonalSym | BlockBandedSym, tol: float, bounds: Optional[tuple[float, float]] = None
) -> float:
    if isinstance(matrix, BlockBandedSym):
        return smallest_eigenvalues_banded(matrix, 1, tol, bounds)[0]
    return bisect_eigenvalues(matrix, 1, 1, tol, bounds)[0]
