import csv
import io
import json

import numpy as np
import pytest

from hodgespec.errors import DomainError
from hodgespec.harmonic import classify_harmonic
from hodgespec.metric import hyperbolic_profile, perturbed_profile
from hodgespec.reduction import Channel
from hodgespec.report import dumps, loads, operator_rows, write_brackets_csv, write_operator_csv
from hodgespec.selftest import FAIL, PASS, SKIPPED, run_selftest
from hodgespec.spectrum import BracketConfig, essential_bottom_bracket, summarize_sweep, verify

from helpers import compact_tail_profile

HP = hyperbolic_profile()
FAST = BracketConfig(lengths=(10.0, 20.0), mode_count=2)


def test_spectrum_report_round_trip():
    rep = verify(HP, 4, 1, FAST)
    text = dumps(rep)
    assert "\n" not in text
    doc = json.loads(text)
    assert doc["schema_version"] == 1 and doc["kind"] == "spectrum_report"
    assert loads(text) == rep


def test_harmonic_report_round_trip_with_infinities():
    rep = classify_harmonic(HP, 4, 2)
    text = dumps(rep)
    assert "Infinity" not in text
    assert loads(text) == rep
    assert loads(text).volume_integral.upper == float("inf")


def test_convergent_volume_round_trip():
    rep = classify_harmonic(compact_tail_profile(), 3, 0)
    assert loads(dumps(rep)) == rep


def test_sweep_and_bracket_round_trip():
    summary = summarize_sweep(2, "hyperbolic", [verify(HP, 2, p, FAST) for p in range(3)])
    assert loads(dumps(summary)) == summary
    b = essential_bottom_bracket(HP, Channel("I", 3, 0, 0.0), lengths=(10.0,))
    assert loads(dumps(b)) == b


def test_unknown_documents_rejected():
    with pytest.raises(DomainError):
        loads(json.dumps({"schema_version": 99, "kind": "spectrum_report", "data": {}}))
    with pytest.raises(DomainError):
        loads(json.dumps({"schema_version": 1, "kind": "other", "data": {}}))
    with pytest.raises(DomainError):
        dumps(object())


def test_bracket_csv_rows():
    rep = verify(HP, 3, 0, FAST)
    buf = io.StringIO()
    write_brackets_csv(rep, buf)
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    assert rows[0] == ["channel", "lambda", "L", "lower", "upper"]
    assert len(rows) == 1 + 2 * 2


def test_operator_dump_constant_column():
    header, rows = operator_rows(HP, Channel("I", 3, 0, 0.0), 0.5, 10.0, 20)
    assert header == ["t", "a", "q1"]
    assert np.allclose(rows[:, 2], 1.0, atol=1e-12)


def test_operator_dump_channel_three_columns():
    header, rows = operator_rows(HP, Channel("III", 5, 2, 4.0), 1.0, 5.0, 5)
    assert len(header) == 5 and rows.shape == (5, 5)
    buf = io.StringIO()
    write_operator_csv(header, rows, buf)
    assert buf.getvalue().splitlines()[0] == "t,a,q1,q2,c"


def test_operator_dump_rejects_nonpositive_t():
    with pytest.raises(DomainError):
        operator_rows(HP, Channel("I", 3, 0, 0.0), 0.0, 1.0, 5)


def test_selftest_default_passes():
    results = run_selftest()
    assert all(r.status == PASS for r in results)


def test_selftest_skips_duality_for_varying_f():
    results = run_selftest(profile=perturbed_profile(1.0, 1.0), w2_variant="dual-consistent")
    statuses = {r.name: r.status for r in results}
    assert statuses["degree duality of channels I and II"] == SKIPPED
    assert FAIL not in statuses.values()


def test_selftest_rejects_zero_tolerance():
    with pytest.raises(DomainError):
        run_selftest(tol=0.0)
