"""Command-line interface.

Exit codes: 0 consistent / success, 1 usage or configuration error,
2 inconsistent (or a failed self-test), 3 inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from . import report as rep
from .errors import DomainError, HodgeSpecError
from .harmonic import INCONCLUSIVE as HARMONIC_INCONCLUSIVE
from .harmonic import classify_harmonic
from .metric import PROFILE_PARAMS, get_profile
from .reduction import AS_PRINTED, CHANNELS, W2_VARIANTS, Channel
from .selftest import FAIL, run_selftest
from .spectrum import (
    CONSISTENT,
    INCONSISTENT,
    BracketConfig,
    channels_for_degree,
    mode_eigenvalues,
    summarize_sweep,
    verify,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONSISTENT = 2
EXIT_INCONCLUSIVE = 3

FORMATS = ("human", "structured", "csv")
SELFTEST_TOL = 1e-9


def verdict_exit_code(verdict: str) -> int:
    if verdict == CONSISTENT:
        return EXIT_OK
    if verdict == INCONSISTENT:
        return EXIT_INCONSISTENT
    return EXIT_INCONCLUSIVE


class _Parser(argparse.ArgumentParser):
    # usage errors share exit code 1 with configuration errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _lengths(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid length list {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty length list")
    return values


@dataclass(frozen=True)
class RunConfig:
    command: str
    profile: str = "hyperbolic"
    alpha: float = 0.0
    beta: float = 0.0
    N: Optional[int] = None
    p: Optional[int] = None
    channel: Optional[str] = None
    mode_count: int = 3
    cut: float = 8.0
    lengths: tuple[float, ...] = (10.0, 20.0, 40.0)
    n_per_unit: int = 100
    tol: float = 1e-3
    report_tol: float = 2e-2
    fmt: str = "human"
    w2_variant: str = AS_PRINTED
    out: Optional[str] = None
    lam: float = 0.0
    t_min: float = 1.0
    t_max: float = 20.0
    samples: int = 200
    jobs: int = 1

    def __post_init__(self):
        for name in ("mode_count", "cut", "n_per_unit", "tol", "report_tol", "samples", "jobs"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if any(not L > 0 for L in self.lengths):
            raise DomainError("lengths must be positive")
        if self.N is not None and self.N < 2:
            raise DomainError("--dim must be at least 2")
        if self.N is not None and self.p is not None and not 0 <= self.p <= self.N:
            raise DomainError(f"--degree must lie in 0..{self.N}")

    def profile_params(self) -> dict:
        return {k: getattr(self, k) for k in PROFILE_PARAMS.get(self.profile, ())}

    def bracket_config(self) -> BracketConfig:
        return BracketConfig(
            cut=self.cut,
            lengths=self.lengths,
            n_per_unit=self.n_per_unit,
            tol=self.tol,
            report_tol=self.report_tol,
            mode_count=self.mode_count,
            w2_variant=self.w2_variant,
        )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profile", default="hyperbolic", help="metric profile name")
    common.add_argument("--alpha", type=float, default=0.0, help="perturbation of f (perturbed profile)")
    common.add_argument("--beta", type=float, default=0.0, help="perturbation of g (perturbed profile)")
    common.add_argument("--dim", type=int, dest="N", help="manifold dimension N")
    common.add_argument("--degree", type=int, dest="p", help="form degree p")
    common.add_argument("--channel", choices=CHANNELS, help="restrict to one channel")
    common.add_argument("--modes", type=int, default=3, dest="mode_count", help="sphere modes per channel")
    common.add_argument("--cut", type=float, default=8.0, help="start c of the exterior domain")
    common.add_argument("--lengths", type=_lengths, default=(10.0, 20.0, 40.0), help="comma list of truncation lengths")
    common.add_argument("--density", type=int, default=100, dest="n_per_unit", help="grid points per unit length")
    common.add_argument("--tol", type=float, help="eigenvalue and convergence tolerance (selftest: error tolerance)")
    common.add_argument("--report-tol", type=float, default=2e-2, help="tolerance for the consistency verdict")
    common.add_argument("--format", choices=FORMATS, default="human", dest="fmt")
    common.add_argument("--w2-cross-term", choices=W2_VARIANTS, default=AS_PRINTED, dest="w2_variant")
    common.add_argument("--out", help="write output here instead of standard output")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")

    parser = _Parser(prog="hodgespec", description="Essential spectrum and L2 harmonic forms of rotationally symmetric metrics.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("spectrum", parents=[common], help="bracket the bottom of the essential spectrum")
    sub.add_parser("harmonic", parents=[common], help="classify L2 harmonic forms")
    dump = sub.add_parser("operator-dump", parents=[common], help="sample a radial operator as CSV")
    dump.add_argument("--lambda", type=float, default=0.0, dest="lam", help="sphere eigenvalue")
    dump.add_argument("--t-min", type=float, default=1.0)
    dump.add_argument("--t-max", type=float, default=20.0)
    dump.add_argument("--samples", type=int, default=200)
    sub.add_parser("sweep", parents=[common], help="verify every degree p = 0..N")
    sub.add_parser("selftest", parents=[common], help="run the built-in oracle checks")
    sub.add_parser("modes", parents=[common], help="list sphere eigenvalues for each channel")
    return parser


def _require(cfg: RunConfig, *names: str) -> None:
    flags = {"N": "--dim", "p": "--degree", "channel": "--channel"}
    missing = [flags[n] for n in names if getattr(cfg, n) is None]
    if missing:
        raise DomainError(f"{cfg.command} needs {', '.join(missing)}")


def _emit(cfg: RunConfig, human: Callable[[], str], structured: Callable[[], str], csv_writer: Callable[[io.StringIO], None]):
    if cfg.fmt == "human":
        text = human() + "\n"
    elif cfg.fmt == "structured":
        text = structured() + "\n"
    else:
        buf = io.StringIO()
        csv_writer(buf)
        text = buf.getvalue()
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_pool(fn: Callable, items: Iterable, jobs: int) -> list:
    """Map ``fn`` over ``items``, in worker processes when ``jobs > 1``; order is preserved."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _verify_job(args):
    name, params, N, p, config = args
    return verify(get_profile(name, **params), N, p, config)


def cmd_spectrum(cfg: RunConfig) -> int:
    _require(cfg, "N", "p")
    profile = get_profile(cfg.profile, **cfg.profile_params())
    channels = (cfg.channel,) if cfg.channel else None
    report = verify(profile, cfg.N, cfg.p, cfg.bracket_config(), channels)
    _emit(
        cfg,
        lambda: rep.format_spectrum(report),
        lambda: rep.dumps(report),
        lambda buf: rep.write_brackets_csv(report, buf),
    )
    return verdict_exit_code(report.verdict)


def cmd_harmonic(cfg: RunConfig) -> int:
    _require(cfg, "N", "p")
    profile = get_profile(cfg.profile, **cfg.profile_params())
    report = classify_harmonic(profile, cfg.N, cfg.p)
    _emit(
        cfg,
        lambda: rep.format_harmonic(report),
        lambda: rep.dumps(report),
        lambda buf: rep.write_harmonic_csv(report, buf),
    )
    return EXIT_INCONCLUSIVE if report.classification == HARMONIC_INCONCLUSIVE else EXIT_OK


def cmd_operator_dump(cfg: RunConfig) -> int:
    _require(cfg, "N", "p", "channel")
    profile = get_profile(cfg.profile, **cfg.profile_params())
    channel = Channel(cfg.channel, cfg.N, cfg.p, cfg.lam)
    header, rows = rep.operator_rows(profile, channel, cfg.t_min, cfg.t_max, cfg.samples, cfg.w2_variant)
    writer = lambda buf: rep.write_operator_csv(header, rows, buf)  # noqa: E731

    def structured() -> str:
        return json.dumps({"schema_version": 1, "kind": "operator_dump", "columns": header, "rows": rows.tolist()})

    def human() -> str:
        buf = io.StringIO()
        writer(buf)
        return buf.getvalue().rstrip("\n")

    _emit(cfg, human, structured, writer)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    _require(cfg, "N")
    profile = get_profile(cfg.profile, **cfg.profile_params())
    config = cfg.bracket_config()
    jobs = [(cfg.profile, cfg.profile_params(), cfg.N, p, config) for p in range(cfg.N + 1)]
    reports = run_pool(_verify_job, jobs, cfg.jobs)
    summary = summarize_sweep(cfg.N, profile.label(), reports)
    _emit(
        cfg,
        lambda: rep.format_sweep(summary),
        lambda: rep.dumps(summary),
        lambda buf: rep.write_sweep_csv(summary, buf),
    )
    return verdict_exit_code(summary.verdict)


def cmd_selftest(cfg: RunConfig) -> int:
    profile = get_profile(cfg.profile, **cfg.profile_params())
    results = run_selftest(cfg.tol, profile, cfg.w2_variant)

    def human() -> str:
        return "\n".join(f"{r.status:8s} {r.name}  error={r.error:.3g} {r.detail}".rstrip() for r in results)

    def structured() -> str:
        rows = [{"name": r.name, "status": r.status, "error": None if r.error != r.error else r.error, "detail": r.detail} for r in results]
        return json.dumps({"schema_version": 1, "kind": "selftest", "checks": rows})

    def writer(buf) -> None:
        w = csv.writer(buf)
        w.writerow(["name", "status", "error", "detail"])
        for r in results:
            w.writerow([r.name, r.status, repr(r.error), r.detail])

    _emit(cfg, human, structured, writer)
    return EXIT_INCONSISTENT if any(r.status == FAIL for r in results) else EXIT_OK


def cmd_modes(cfg: RunConfig) -> int:
    _require(cfg, "N", "p")
    rows = [(tag, lam) for tag in channels_for_degree(cfg.N, cfg.p) for lam in mode_eigenvalues(cfg.N, cfg.p, tag, cfg.mode_count)]

    def writer(buf) -> None:
        w = csv.writer(buf)
        w.writerow(["channel", "lambda"])
        w.writerows((tag, repr(lam)) for tag, lam in rows)

    _emit(
        cfg,
        lambda: "\n".join(f"channel {tag:3s} lambda={lam:g}" for tag, lam in rows),
        lambda: json.dumps({"schema_version": 1, "kind": "modes", "modes": [{"channel": t, "lambda": l} for t, l in rows]}),
        writer,
    )
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args = vars(ns)
    if args["tol"] is None:
        args["tol"] = SELFTEST_TOL if ns.command == "selftest" else 1e-3
    try:
        cfg = RunConfig(**args)
        if cfg.command == "spectrum":
            return cmd_spectrum(cfg)
        if cfg.command == "harmonic":
            return cmd_harmonic(cfg)
        if cfg.command == "operator-dump":
            return cmd_operator_dump(cfg)
        if cfg.command == "sweep":
            return cmd_sweep(cfg)
        if cfg.command == "selftest":
            return cmd_selftest(cfg)
        return cmd_modes(cfg)
    except (HodgeSpecError, OSError) as exc:
        print(f"hodgespec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
