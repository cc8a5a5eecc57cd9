"""Brackets for the bottom of the essential spectrum, per channel and mode.

Each bracket pairs a lower bound (the infimum of the potential, or of the
smallest eigenvalue of the 2x2 potential matrix for channel III, over the
exterior domain) with an upper bound (the smallest Dirichlet eigenvalue on
``[c, c+L]``).  The lower bound is valid because the kinetic term
``int w'^2 / f`` is nonnegative.  The upper bound tracks the bottom of the
whole exterior spectrum, which may contain isolated eigenvalues below the
essential threshold, so consistency is judged within a report tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .discretize import BlockBandedSym, Grid, TridiagonalSym, assemble
from .eigensolve import count_below, smallest_eigenvalue
from .errors import DomainError, EvaluationError
from .harmonic import INFINITE_DIMENSIONAL, classify_harmonic
from .metric import MetricProfile
from .reduction import AS_PRINTED, Channel, RadialOperator, build_radial_operator
from .sphere_modes import closed_eigenvalues, coclosed_eigenvalues

SCHEMA_VERSION = 1

CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"
INCONCLUSIVE = "inconclusive"

# potentials are sampled up to here for the lower bound; sinh^2 stays finite
LOWER_SAMPLE_END = 200.0


@dataclass(frozen=True)
class BracketConfig:
    cut: float = 8.0
    lengths: tuple[float, ...] = (10.0, 20.0, 40.0)
    n_per_unit: int = 100
    tol: float = 1e-3
    report_tol: float = 2e-2
    mode_count: int = 3
    w2_variant: str = AS_PRINTED

    def __post_init__(self):
        if not self.cut > 0:
            raise DomainError("cut c must be positive")
        if not self.lengths or any(not L > 0 for L in self.lengths):
            raise DomainError("lengths must be positive")
        if list(self.lengths) != sorted(set(self.lengths)):
            raise DomainError("lengths must be strictly increasing")
        if self.n_per_unit < 1:
            raise DomainError("n_per_unit must be positive")
        if not (self.tol > 0 and self.report_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.mode_count < 1:
            raise DomainError("mode_count must be at least 1")


def channel_threshold(N: int, p: int, tag: str) -> float:
    """Predicted bottom of the essential spectrum of one channel."""
    lo, hi = {"I": (0, N - 1), "II": (1, N), "III": (1, N - 1)}.get(tag, (1, 0))
    if N < 2 or not lo <= p <= hi:
        raise DomainError(f"channel {tag!r} undefined for N={N}, p={p}")
    first = ((N - 2 * p - 1) / 2) ** 2
    second = ((N - 2 * p + 1) / 2) ** 2
    return {"I": first, "II": second, "III": min(first, second)}[tag]


@dataclass(frozen=True)
class Prediction:
    interval_start: float
    includes_isolated_zero: bool


def predict_essential_spectrum(N: int, p: int) -> Prediction:
    if N < 2 or not 0 <= p <= N:
        raise DomainError(f"need N >= 2 and 0 <= p <= N, got N={N}, p={p}")
    if 2 * p == N:
        return Prediction(0.25, True)
    if p == 0:
        return Prediction(channel_threshold(N, 0, "I"), False)
    if p == N:
        return Prediction(channel_threshold(N, N, "II"), False)
    return Prediction(min(((N - 2 * p - 1) / 2) ** 2, ((N - 2 * p + 1) / 2) ** 2), False)


def channels_for_degree(N: int, p: int) -> tuple[str, ...]:
    if p == 0:
        return ("I",)
    if p == N:
        return ("II",)
    return ("I", "II", "III")


def mode_eigenvalues(N: int, p: int, tag: str, count: int) -> list[float]:
    """Sphere eigenvalues parametrising the channel at form degree ``p``.

    I: coclosed ``p``-forms (for ``p = N-1`` only the volume form);
    II: closed ``(p-1)``-forms (for ``p = 1`` only the constants);
    III: coclosed ``(p-1)``-forms with positive eigenvalue.
    """
    if tag == "I":
        if p == N - 1:
            return [0.0]
        return [m.lam for m in coclosed_eigenvalues(N, p, count)]
    if tag == "II":
        if p == 1:
            return [0.0]
        return [m.lam for m in closed_eigenvalues(N, p - 1, count)]
    if tag == "III":
        modes = coclosed_eigenvalues(N, p - 1, count + 1)
        return [m.lam for m in modes if m.lam > 0][:count]
    raise DomainError(f"unknown channel {tag!r}")


@dataclass(frozen=True)
class EssentialBracket:
    channel: str
    lam: float
    lower: float
    upper: float
    c: float
    L: float
    n: int
    lengths: tuple[float, ...]
    uppers: tuple[float, ...]
    extrapolated: float
    converged: bool
    diagnostics: str = ""


def _trial_bound(matrix: TridiagonalSym | BlockBandedSym) -> float:
    # Rayleigh quotient of the lowest Dirichlet sine mode: an upper bound on lambda_min
    if isinstance(matrix, BlockBandedSym):
        return min(_trial_bound(part) for part in matrix.components())
    n = matrix.n
    v = np.sin(np.pi * np.arange(1, n + 1) / (n + 1))
    Tv = matrix.diag * v
    Tv[:-1] += matrix.off * v[1:]
    Tv[1:] += matrix.off * v[:-1]
    return float(v @ Tv / (v @ v))


def _smallest(op: RadialOperator, grid: Grid, tol: float) -> float:
    matrix = assemble(op, grid)
    # the stiffness part is positive semidefinite, so the pointwise potential
    # minimum bounds lambda_min from below
    lo = float(np.min(op.potential_matrix_min(grid.points)))
    hi = _trial_bound(matrix)
    if isinstance(matrix, BlockBandedSym):
        # a vector living on one component is a valid trial vector; the coupling adds nothing
        hi = max(hi, lo)
    pad = tol + 1e-12 * max(abs(lo), abs(hi), 1.0)
    return float(smallest_eigenvalue(matrix, tol, (lo - pad, hi + pad)))


def _lower_bound(op: RadialOperator, channel: Channel, c: float, end: float, n_per_unit: int) -> float:
    dense = np.linspace(c, end, max(int((end - c) * n_per_unit) + 1, 2))
    sparse = np.geomspace(max(end, c), max(LOWER_SAMPLE_END, end), 400)
    t = np.concatenate([dense, sparse])
    pot = np.asarray(op.potential_matrix_min(t), dtype=float)
    if not np.all(np.isfinite(pot)):
        raise EvaluationError(f"non-finite potential while bounding channel {channel.tag} from below")
    return float(min(pot.min(), channel.limit()))


def _convergence(lengths, uppers, tol) -> tuple[bool, float, str]:
    u = list(uppers)
    if len(u) == 1:
        return False, u[0], "single length; convergence not assessed"
    for a, b in zip(u, u[1:]):
        if b > a + tol:
            return False, u[-1], "upper bound increased with L (domain monotonicity violated)"
    if len(u) == 2:
        return abs(u[0] - u[1]) <= tol, u[1], ""
    # Richardson in 1/L^2 (Dirichlet box law) from the last two pairs
    def extrap(L1, u1, L2, u2):
        r = (L2 / L1) ** 2
        return (r * u2 - u1) / (r - 1)

    e1 = extrap(lengths[-3], u[-3], lengths[-2], u[-2])
    e2 = extrap(lengths[-2], u[-2], lengths[-1], u[-1])
    converged = abs(e1 - e2) <= tol or abs(u[-2] - u[-1]) <= tol
    note = "" if converged else f"extrapolants {e1:.6g} vs {e2:.6g} and last step {u[-2] - u[-1]:.3g} exceed tol"
    return converged, float(e2), note


def essential_bottom_bracket(
    profile: MetricProfile,
    channel: Channel,
    c: float = 8.0,
    lengths: tuple[float, ...] = (10.0, 20.0, 40.0),
    n_per_unit: int = 100,
    tol: float = 1e-3,
    w2_variant: str = AS_PRINTED,
) -> EssentialBracket:
    """Two-sided bracket for the bottom of one channel's exterior spectrum."""
    if not profile.certified:
        raise DomainError(f"profile {profile.label()} has no certified hyperbolic asymptotics")
    BracketConfig(cut=c, lengths=tuple(lengths), n_per_unit=n_per_unit, tol=tol)
    op = build_radial_operator(profile, channel, c, w2_variant)
    grids = [Grid.with_density(c, L, n_per_unit) for L in lengths]
    uppers = tuple(_smallest(op, g, tol / 10) for g in grids)
    lower = _lower_bound(op, channel, c, c + grids[-1].L, n_per_unit)
    converged, extrapolated, note = _convergence([g.L for g in grids], uppers, tol)
    return EssentialBracket(
        channel=channel.tag,
        lam=channel.lam,
        lower=lower,
        upper=uppers[-1],
        c=c,
        L=grids[-1].L,
        n=grids[-1].n,
        lengths=tuple(g.L for g in grids),
        uppers=uppers,
        extrapolated=extrapolated,
        converged=converged,
        diagnostics=note,
    )


@dataclass(frozen=True)
class ChannelSweep:
    channel: str
    threshold: float
    brackets: tuple[EssentialBracket, ...]
    lower: float
    upper: float

    @property
    def converged(self) -> bool:
        return all(b.converged for b in self.brackets)


def sweep_modes(
    profile: MetricProfile, N: int, p: int, tag: str, mode_count: int, config: BracketConfig = BracketConfig()
) -> ChannelSweep:
    if mode_count < 1:
        raise DomainError("mode_count must be at least 1")
    brackets = []
    for lam in mode_eigenvalues(N, p, tag, mode_count):
        brackets.append(
            essential_bottom_bracket(
                profile, Channel(tag, N, p, lam), config.cut, config.lengths, config.n_per_unit, config.tol, config.w2_variant
            )
        )
    return ChannelSweep(
        channel=tag,
        threshold=channel_threshold(N, p, tag),
        brackets=tuple(brackets),
        lower=min(b.lower for b in brackets),
        upper=min(b.upper for b in brackets),
    )


@dataclass(frozen=True)
class SpectrumReport:
    N: int
    p: int
    profile: str
    predicted_start: float
    isolated_zero_predicted: bool
    channels: tuple[ChannelSweep, ...]
    aggregate_lower: float
    aggregate_upper: float
    verdict: str
    zero_in_essential: bool
    harmonic_classification: str
    report_tol: float
    notes: tuple[str, ...] = field(default_factory=tuple)
    schema_version: int = SCHEMA_VERSION


def judge(predicted: float, channels, report_tol: float, zero_ok: bool = True) -> str:
    """Verdict from channel sweeps against the predicted interval start."""
    brackets = [b for ch in channels for b in ch.brackets]
    if not all(b.converged for b in brackets):
        return INCONCLUSIVE
    lower = min(ch.lower for ch in channels)
    upper = min(ch.upper for ch in channels)
    below = any(b.upper < predicted - report_tol for b in brackets)
    ok = abs(upper - predicted) <= report_tol and lower <= predicted + report_tol and not below and zero_ok
    return CONSISTENT if ok else INCONSISTENT


def verify(
    profile: MetricProfile,
    N: int,
    p: int,
    config: BracketConfig = BracketConfig(),
    channels: Optional[tuple[str, ...]] = None,
) -> SpectrumReport:
    """Bracket the applicable channels and compare with the predicted essential spectrum.

    ``channels`` restricts the run to a subset; the prediction is then the
    smallest threshold among the selected channels.
    """
    pred = predict_essential_spectrum(N, p)
    applicable = channels_for_degree(N, p)
    selected = applicable if channels is None else tuple(channels)
    if not selected or any(tag not in applicable for tag in selected):
        raise DomainError(f"channels {selected} not applicable at N={N}, p={p}; choose from {applicable}")
    if selected != applicable:
        pred = Prediction(min(channel_threshold(N, p, tag) for tag in selected), pred.includes_isolated_zero)
    channels = tuple(sweep_modes(profile, N, p, tag, config.mode_count, config) for tag in selected)
    harmonic = classify_harmonic(profile, N, p)
    zero_ess = harmonic.classification == INFINITE_DIMENSIONAL
    notes = [
        "the union over sphere modes approximates the channel essential spectrum from inside only",
        "convergence in L is a heuristic (Richardson agreement or stabilisation)",
    ]
    if 2 * p != N:
        notes.append("p != N/2: zero cannot be an infinite-multiplicity eigenvalue, so it is not in the essential spectrum")
    verdict = judge(pred.interval_start, channels, config.report_tol, zero_ess == pred.includes_isolated_zero)
    return SpectrumReport(
        N=N,
        p=p,
        profile=profile.label(),
        predicted_start=pred.interval_start,
        isolated_zero_predicted=pred.includes_isolated_zero,
        channels=channels,
        aggregate_lower=min(ch.lower for ch in channels),
        aggregate_upper=min(ch.upper for ch in channels),
        verdict=verdict,
        zero_in_essential=zero_ess,
        harmonic_classification=harmonic.classification,
        report_tol=config.report_tol,
        notes=tuple(notes),
    )


def no_spectrum_below(profile: MetricProfile, channel: Channel, grid: Grid, margin: float = 0.05) -> int:
    """Eigenvalue count of the assembled operator below ``threshold - margin``."""
    op = build_radial_operator(profile, channel, grid.c)
    return count_below(assemble(op, grid), channel_threshold(channel.N, channel.p, channel.tag) - margin)


@dataclass(frozen=True)
class SweepRow:
    p: int
    predicted_start: float
    isolated_zero: bool
    aggregate_lower: float
    aggregate_upper: float
    verdict: str


@dataclass(frozen=True)
class SweepSummary:
    N: int
    profile: str
    rows: tuple[SweepRow, ...]
    verdict: str
    schema_version: int = SCHEMA_VERSION


def summarize_sweep(N: int, profile: str, reports) -> SweepSummary:
    """One row per degree; the sweep is consistent only if every row is."""
    rows = tuple(
        SweepRow(r.p, r.predicted_start, r.zero_in_essential, r.aggregate_lower, r.aggregate_upper, r.verdict)
        for r in sorted(reports, key=lambda r: r.p)
    )
    verdicts = {r.verdict for r in rows}
    if verdicts == {CONSISTENT}:
        verdict = CONSISTENT
    elif INCONSISTENT in verdicts:
        verdict = INCONSISTENT
    else:
        verdict = INCONCLUSIVE
    return SweepSummary(N, profile, rows, verdict)
