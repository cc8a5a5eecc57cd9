"""Serialization of reports: one-line JSON documents, CSV tables, plain text.

Every structured document is ``{"schema_version", "kind", "data"}`` on a
single line.  Non-finite floats are written as the strings ``"inf"``,
``"-inf"`` and ``"nan"`` so the output stays strict JSON.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import typing
from typing import Any, TextIO, Union

import numpy as np

from .errors import DomainError
from .harmonic import HarmonicReport, IntegralVerdict
from .reduction import AS_PRINTED, Channel, build_radial_operator
from .metric import MetricProfile
from .spectrum import SCHEMA_VERSION, EssentialBracket, SpectrumReport, SweepSummary

KINDS = {
    "spectrum_report": SpectrumReport,
    "harmonic_report": HarmonicReport,
    "sweep_summary": SweepSummary,
    "essential_bracket": EssentialBracket,
}
_KIND_OF = {cls: kind for kind, cls in KINDS.items()}
_NONFINITE = {"inf": math.inf, "-inf": -math.inf, "nan": math.nan}


def _encode(value: Any) -> Any:
    if dataclasses.is_dataclass(value):
        return {f.name: _encode(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return value


def _decode(tp: Any, value: Any) -> Any:
    origin = typing.get_origin(tp)
    if origin is Union:
        args = [a for a in typing.get_args(tp) if a is not type(None)]
        return None if value is None else _decode(args[0], value)
    if origin is tuple:
        (inner, _) = typing.get_args(tp)
        return tuple(_decode(inner, v) for v in value)
    if dataclasses.is_dataclass(tp):
        hints = typing.get_type_hints(tp)
        return tp(**{f.name: _decode(hints[f.name], value[f.name]) for f in dataclasses.fields(tp) if f.name in value})
    if tp is float:
        return _NONFINITE[value] if isinstance(value, str) else float(value)
    if tp is int:
        return int(value)
    if tp is bool:
        return bool(value)
    return value


def to_document(report) -> dict:
    kind = _KIND_OF.get(type(report))
    if kind is None:
        raise DomainError(f"cannot serialize {type(report).__name__}")
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "data": _encode(report)}


def dumps(report) -> str:
    """Single-line JSON document for ``report``."""
    return json.dumps(to_document(report), sort_keys=True, allow_nan=False)


def loads(text: str):
    """Inverse of :func:`dumps`."""
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise DomainError(f"unsupported schema version {doc.get('schema_version')!r}")
    cls = KINDS.get(doc.get("kind"))
    if cls is None:
        raise DomainError(f"unknown document kind {doc.get('kind')!r}")
    return _decode(cls, doc["data"])


def _fmt(x) -> str:
    return "-" if x is None else f"{x:.6g}"


# CSV -------------------------------------------------------------------------


def write_brackets_csv(report: SpectrumReport, stream: TextIO) -> None:
    """Rows ``channel, lambda, L, lower, upper``, one per bracket and length."""
    w = csv.writer(stream)
    w.writerow(["channel", "lambda", "L", "lower", "upper"])
    for sweep in report.channels:
        for b in sweep.brackets:
            for L, u in zip(b.lengths, b.uppers):
                w.writerow([b.channel, repr(b.lam), repr(L), repr(b.lower), repr(u)])


def write_sweep_csv(summary: SweepSummary, stream: TextIO) -> None:
    w = csv.writer(stream)
    w.writerow(["p", "predicted_start", "isolated_zero", "lower", "upper", "verdict"])
    for r in summary.rows:
        w.writerow([r.p, repr(r.predicted_start), r.isolated_zero, repr(r.aggregate_lower), repr(r.aggregate_upper), r.verdict])


def write_harmonic_csv(report: HarmonicReport, stream: TextIO) -> None:
    w = csv.writer(stream)
    w.writerow(["N", "p", "classification", "volume", "middle", "middle_value", "conformal_radius"])
    w.writerow([
        report.N,
        report.p,
        report.classification,
        report.volume_integral.kind,
        report.middle_integral.kind,
        "" if report.middle_integral.value is None else repr(report.middle_integral.value),
        "" if report.conformal_radius is None else repr(report.conformal_radius),
    ])


def operator_rows(
    profile: MetricProfile,
    channel: Channel,
    t_min: float,
    t_max: float,
    samples: int,
    w2_variant: str = AS_PRINTED,
) -> tuple[list[str], np.ndarray]:
    """Header and sampled ``(t, a, q1[, q2, c])`` values of a radial operator."""
    if not 0 < t_min < t_max:
        raise DomainError(f"need 0 < t_min < t_max, got [{t_min}, {t_max}]")
    if samples < 2:
        raise DomainError("need at least two samples")
    op = build_radial_operator(profile, channel, t_min, w2_variant)
    t = np.linspace(t_min, t_max, samples)
    cols = [t, np.broadcast_to(op.a(t), t.shape), np.broadcast_to(op.q1(t), t.shape)]
    header = ["t", "a", "q1"]
    if op.coupled:
        cols += [np.broadcast_to(op.q2(t), t.shape), np.broadcast_to(op.coupling(t), t.shape)]
        header += ["q2", "c"]
    return header, np.column_stack(cols)


def write_operator_csv(header: list[str], rows: np.ndarray, stream: TextIO) -> None:
    w = csv.writer(stream)
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) for x in row])


# human-readable ---------------------------------------------------------------


def _bracket_line(b: EssentialBracket) -> str:
    flag = "" if b.converged else "  (not converged)"
    return f"    lambda={b.lam:<8g} lower={b.lower:.6g}  upper={b.upper:.6g}  L={b.L:g}{flag}"


def format_spectrum(report: SpectrumReport) -> str:
    zero = "{0} u " if report.isolated_zero_predicted else ""
    lines = [
        f"profile {report.profile}  N={report.N}  p={report.p}",
        f"predicted essential spectrum: {zero}[{report.predicted_start:g}, inf)",
        f"bracket for its start: [{report.aggregate_lower:.6g}, {report.aggregate_upper:.6g}]",
        f"harmonic forms: {report.harmonic_classification} (zero in essential spectrum: {report.zero_in_essential})",
    ]
    for sweep in report.channels:
        lines.append(f"  channel {sweep.channel}: threshold {sweep.threshold:g}")
        lines.extend(_bracket_line(b) for b in sweep.brackets)
    lines.extend(f"note: {n}" for n in report.notes)
    lines.append(f"verdict: {report.verdict}")
    return "\n".join(lines)


def format_harmonic(report: HarmonicReport) -> str:
    def verdict(v: IntegralVerdict) -> str:
        val = f" = {v.value:.10g}" if v.value is not None else ""
        return f"{v.kind} ({v.tail_class}){val}"

    lines = [
        f"profile {report.profile}  N={report.N}  p={report.p}",
        f"classification: {report.classification}",
        f"volume integral: {verdict(report.volume_integral)}",
        f"middle integral: {verdict(report.middle_integral)}",
        f"conformal radius: {_fmt(report.conformal_radius)}",
        f"zero in point spectrum: {report.zero_in_point_spectrum}",
        f"zero in essential spectrum: {report.zero_in_essential_spectrum}",
    ]
    return "\n".join(lines)


def format_sweep(summary: SweepSummary) -> str:
    lines = [f"profile {summary.profile}  N={summary.N}", f"{'p':>3} {'start':>8} {'zero':>5} {'lower':>12} {'upper':>12}  verdict"]
    for r in summary.rows:
        lines.append(
            f"{r.p:>3} {r.predicted_start:>8g} {str(r.isolated_zero):>5} {r.aggregate_lower:>12.6g} {r.aggregate_upper:>12.6g}  {r.verdict}"
        )
    lines.append(f"verdict: {summary.verdict}")
    return "\n".join(lines)

