import csv
import io
import json
import subprocess
import sys

import pytest

from hodgespec.cli import main
from hodgespec.report import loads

FAST = ["--modes", "1"]


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum_function_case(capsys):
    code, out, _ = run(["spectrum", "--profile", "hyperbolic", "--dim", "3", "--degree", "0", "--format", "structured"], capsys)
    assert code == 0
    rep = loads(out)
    assert rep.predicted_start == 1.0 and rep.verdict == "consistent"


def test_spectrum_middle_degree(capsys):
    code, out, _ = run(["spectrum", "--profile", "hyperbolic", "--dim", "4", "--degree", "2", "--format", "structured"], capsys)
    assert code == 0
    rep = loads(out)
    assert rep.predicted_start == 0.25 and rep.isolated_zero_predicted and rep.zero_in_essential


def test_degree_out_of_range_is_usage_error(capsys):
    code, _, err = run(["spectrum", "--dim", "4", "--degree", "7"], capsys)
    assert code == 1 and "degree" in err


def test_unknown_flag_is_usage_error(capsys):
    code, _, _ = run(["spectrum", "--dimension", "4"], capsys)
    assert code == 1


@pytest.mark.parametrize(
    "N,p,expected",
    [(4, 2, "infinite_dimensional"), (5, 2, "trivial"), (3, 3, "trivial")],
)
def test_harmonic_command(capsys, N, p, expected):
    code, out, _ = run(["harmonic", "--dim", str(N), "--degree", str(p), "--format", "structured"], capsys)
    assert code == 0
    assert json.loads(out)["data"]["classification"] == expected


def test_operator_dump_channel_one(capsys):
    code, out, _ = run(["operator-dump", "--dim", "3", "--degree", "0", "--channel", "I", "--samples", "11", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 11
    assert all(abs(float(r["q1"]) - 1.0) < 1e-12 for r in rows)


def test_operator_dump_channel_three_has_five_columns(capsys):
    args = ["operator-dump", "--dim", "5", "--degree", "2", "--channel", "III", "--lambda", "4", "--format", "csv"]
    code, out, _ = run(args, capsys)
    assert code == 0
    assert out.splitlines()[0].split(",") == ["t", "a", "q1", "q2", "c"]


def test_operator_dump_rejects_nonpositive_t(capsys):
    args = ["operator-dump", "--dim", "3", "--degree", "0", "--channel", "I", "--t-min", "0"]
    assert run(args, capsys)[0] == 1


def test_sweep_three_dimensions(capsys):
    code, out, _ = run(["sweep", "--dim", "3", "--format", "structured", *FAST], capsys)
    assert code == 0
    summary = loads(out)
    assert [r.predicted_start for r in summary.rows] == [1.0, 0.0, 0.0, 1.0]


def test_sweep_unknown_profile(capsys):
    assert run(["sweep", "--profile", "nope", "--dim", "3"], capsys)[0] == 1


def test_sweep_csv(capsys):
    code, out, _ = run(["sweep", "--dim", "2", "--format", "csv", *FAST], capsys)
    assert code == 0
    assert len(out.strip().splitlines()) == 4


def test_selftest(capsys):
    code, out, _ = run(["selftest"], capsys)
    assert code == 0 and "fail" not in out


def test_selftest_skips_duality(capsys):
    args = ["selftest", "--profile", "perturbed", "--alpha", "1", "--beta", "1", "--w2-cross-term", "dual-consistent"]
    code, out, _ = run(args, capsys)
    assert code == 0 and "skipped" in out


def test_selftest_zero_tolerance(capsys):
    assert run(["selftest", "--tol", "0"], capsys)[0] == 1


def test_unconverged_run_is_inconclusive(capsys):
    code, _, _ = run(["spectrum", "--dim", "3", "--degree", "0", "--lengths", "40"], capsys)
    assert code == 3


def test_modes_command(capsys):
    code, out, _ = run(["modes", "--dim", "4", "--degree", "2", "--format", "csv"], capsys)
    assert code == 0
    assert "III,4.0" in out


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(["harmonic", "--dim", "4", "--degree", "2", "--format", "structured", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    assert loads(target.read_text()).classification == "infinite_dimensional"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hodgespec", "harmonic", "--dim", "3", "--degree", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "trivial" in proc.stdout


def test_parallel_sweep_matches_serial(capsys):
    args = ["sweep", "--dim", "2", "--format", "structured", "--lengths", "10,20", "--modes", "1"]
    serial = loads(run(args, capsys)[1])
    parallel = loads(run([*args, "--jobs", "2"], capsys)[1])
    assert serial == parallel
