"""Conservative finite-difference assembly of the radial operators.

The truncated interval ``[c, c+L]`` carries Dirichlet conditions at both
ends; ``a`` is sampled at cell midpoints and the potential at nodes, which
keeps every matrix exactly symmetric and second-order accurate.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .errors import AssemblyError, ConstructionError
from .reduction import RadialOperator


@dataclass(frozen=True)
class Grid:
    c: float
    L: float
    n: int

    def __post_init__(self):
        if not self.c >= 0:
            raise ConstructionError("grid start c must be nonnegative")
        if not self.L > 0:
            raise ConstructionError("grid length L must be positive")
        if self.n < 1:
            raise ConstructionError("grid needs at least one interior point")

    @classmethod
    def with_density(cls, c: float, L: float, per_unit: int) -> "Grid":
        """Grid with spacing exactly ``1/per_unit`` (``L * per_unit`` cells)."""
        cells = int(round(L * per_unit))
        if cells < 2:
            raise ConstructionError("density too low for the requested length")
        return cls(c, cells / per_unit, cells - 1)

    @property
    def h(self) -> float:
        return self.L / (self.n + 1)

    @property
    def points(self) -> np.ndarray:
        return self.c + self.h * np.arange(1, self.n + 1)

    @property
    def midpoints(self) -> np.ndarray:
        return self.c + self.h * (np.arange(self.n + 1) + 0.5)


@dataclass(frozen=True)
class TridiagonalSym:
    diag: np.ndarray
    off: np.ndarray

    def __post_init__(self):
        if len(self.off) != max(len(self.diag) - 1, 0):
            raise ConstructionError("off-diagonal must have n-1 entries")

    @property
    def n(self) -> int:
        return len(self.diag)

    def gershgorin(self) -> tuple[float, float]:
        r = np.zeros(self.n)
        r[:-1] += np.abs(self.off)
        r[1:] += np.abs(self.off)
        return float(np.min(self.diag - r)), float(np.max(self.diag + r))

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)

    def write_csv(self, stream: TextIO) -> None:
        """Rows ``index, diag, off`` (``off`` empty on the last row)."""
        w = csv.writer(stream)
        w.writerow(["index", "diag", "off"])
        for i, d in enumerate(self.diag):
            w.writerow([i, repr(float(d)), repr(float(self.off[i])) if i < self.n - 1 else ""])


@dataclass(frozen=True)
class BlockBandedSym:
    """Interleaved ``(w1_i, w2_i)`` storage of the coupled system, bandwidth 2.

    ``d1``, ``d2`` and ``coupling`` fill the 2x2 diagonal blocks;
    ``off`` is the stiffness entry shared by both components between
    neighbouring nodes.
    """

    d1: np.ndarray
    d2: np.ndarray
    coupling: np.ndarray
    off: np.ndarray

    @property
    def n(self) -> int:
        return len(self.d1)

    @property
    def dim(self) -> int:
        return 2 * self.n

    def bands(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Main diagonal and the first two superdiagonals of the interleaved matrix."""
        b0 = np.empty(self.dim)
        b0[0::2] = self.d1
        b0[1::2] = self.d2
        b1 = np.zeros(self.dim - 1)
        b1[0::2] = self.coupling
        b2 = np.repeat(self.off, 2)
        return b0, b1, b2

    def gershgorin(self) -> tuple[float, float]:
        b0, b1, b2 = self.bands()
        r = np.zeros(self.dim)
        for k, b in ((1, b1), (2, b2)):
            r[:-k] += np.abs(b)
            r[k:] += np.abs(b)
        return float(np.min(b0 - r)), float(np.max(b0 + r))

    def to_dense(self) -> np.ndarray:
        b0, b1, b2 = self.bands()
        return np.diag(b0) + np.diag(b1, 1) + np.diag(b1, -1) + np.diag(b2, 2) + np.diag(b2, -2)

    def components(self) -> tuple[TridiagonalSym, TridiagonalSym]:
        """The two uncoupled tridiagonal blocks (coupling dropped)."""
        return TridiagonalSym(self.d1.copy(), self.off.copy()), TridiagonalSym(self.d2.copy(), self.off.copy())


def _sample(fn, t: np.ndarray, what: str) -> np.ndarray:
    vals = np.broadcast_to(np.asarray(fn(t), dtype=float), t.shape)
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        i = int(bad[0])
        raise AssemblyError(f"non-finite {what} at node {i} (t={t[i]!r})")
    return np.array(vals)


def _stiffness(op: RadialOperator, grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    a_mid = _sample(op.a, grid.midpoints, "a")
    if np.any(a_mid <= 0):
        i = int(np.argmax(a_mid <= 0))
        raise AssemblyError(f"nonpositive a at midpoint {i} (t={grid.midpoints[i]!r})")
    h2 = grid.h * grid.h
    return (a_mid[:-1] + a_mid[1:]) / h2, -a_mid[1:-1] / h2


def assemble_tridiagonal(op: RadialOperator, grid: Grid) -> TridiagonalSym:
    if op.coupled:
        raise ConstructionError("assemble_tridiagonal takes a single-channel operator")
    stiff, off = _stiffness(op, grid)
    q = _sample(op.q1, grid.points, "q1")
    return TridiagonalSym(stiff + q, off)


def assemble_block(op: RadialOperator, grid: Grid) -> BlockBandedSym:
    if not op.coupled:
        raise ConstructionError("assemble_block takes a coupled (type III) operator")
    stiff, off = _stiffness(op, grid)
    t = grid.points
    q1 = _sample(op.q1, t, "q1")
    q2 = _sample(op.q2, t, "q2")
    c = _sample(op.coupling, t, "coupling")
    return BlockBandedSym(stiff + q1, stiff + q2, c, off)


def assemble(op: RadialOperator, grid: Grid) -> TridiagonalSym | BlockBandedSym:
    return assemble_block(op, grid) if op.coupled else assemble_tridiagonal(op, grid)
