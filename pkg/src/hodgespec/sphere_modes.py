"""Eigenvalues of the Hodge Laplacian on the round sphere ``S^{N-1}``.

Coclosed (coexact) ``p``-eigenforms on ``S^n`` have eigenvalues
``(k+p)(k+n-1-p)``, ``k >= 1`` (Gallot-Meyer), plus the constants for
``p = 0``.  Exact ``q``-forms are ``d`` of coclosed ``(q-1)``-forms and keep
their eigenvalue; the only harmonic forms are the constants and the volume
form.  Values are listed without repetition, with multiplicities attached
as metadata.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .errors import DomainError

COCLOSED = "coclosed"
CLOSED = "closed"


@dataclass(frozen=True)
class SphereMode:
    N: int
    degree: int
    kind: str
    k: int
    lam: float
    multiplicity: int


def _coexact_multiplicity(n: int, p: int, k: int) -> int:
    # coexact p-eigenforms on S^n at level k >= 1; informational only
    num = (2 * k + n - 1) * factorial(k + n - 1)
    den = factorial(p) * factorial(n - p - 1) * factorial(k - 1) * (k + p) * (k + n - p - 1)
    return num // den


def _check_dim(N: int) -> None:
    if N < 2:
        raise DomainError(f"ambient dimension N={N} must be at least 2")


def coclosed_eigenvalues(N: int, p: int, count: int) -> list[SphereMode]:
    """First ``count`` distinct eigenvalues on coclosed ``p``-forms of ``S^{N-1}``."""
    _check_dim(N)
    if not 0 <= p <= N - 2:
        raise DomainError(f"coclosed degree p={p} outside [0, {N - 2}] for S^{N - 1}")
    if count < 1:
        raise DomainError("count must be at least 1")
    n = N - 1
    modes: list[SphereMode] = []
    if p == 0:
        modes.append(SphereMode(N, 0, COCLOSED, 0, 0.0, 1))
    k = 1
    while len(modes) < count:
        lam = float((k + p) * (k + n - 1 - p))
        modes.append(SphereMode(N, p, COCLOSED, k, lam, _coexact_multiplicity(n, p, k)))
        k += 1
    return modes


def closed_eigenvalues(N: int, q: int, count: int) -> list[SphereMode]:
    """First ``count`` distinct eigenvalues on closed ``q``-forms of ``S^{N-1}``.

    ``q = N-1`` additionally carries the harmonic volume form (``lam = 0``).
    """
    _check_dim(N)
    if not 1 <= q <= N - 1:
        raise DomainError(f"closed degree q={q} outside [1, {N - 1}] for S^{N - 1}")
    if count < 1:
        raise DomainError("count must be at least 1")
    modes: list[SphereMode] = []
    if q == N - 1:
        modes.append(SphereMode(N, q, CLOSED, 0, 0.0, 1))
    need = count - len(modes)
    if need > 0:
        source = coclosed_eigenvalues(N, q - 1, need + (1 if q == 1 else 0))
        for m in source:
            if m.lam > 0:
                modes.append(SphereMode(N, q, CLOSED, m.k, m.lam, m.multiplicity))
    return modes[:count]
