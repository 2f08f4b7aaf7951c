import csv
import io
import json
import subprocess
import sys

import pytest

from wallach_flow import cli
from wallach_flow.cli import ANALYZE_HEADER, FIELD_HEADER, SCHEMA, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_field_csv_grid_and_header(capsys):
    code, out, _ = run(["field", "--a", "0.125", "--grid", "0.5:2:4"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == FIELD_HEADER
    assert len(rows) == 1 + 4**3
    assert all(len(r) == len(FIELD_HEADER) for r in rows)


def test_field_symmetric_point_row(capsys):
    code, out, _ = run(["field", "--a", "0.125", "--grid", "0.5:1.5:3"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    center = [r for r in rows if r["x1"] == r["x2"] == r["x3"] == "1"]
    assert len(center) == 1
    assert [float(center[0][k]) for k in ("f1", "f2", "f3")] == [0.0, 0.0, 0.0]
    assert center[0]["region"] == "interior/diagonal"


def test_field_uses_17_significant_digits(capsys):
    _, out, _ = run(["field", "--a", "0.2", "--grid", "0.7:1.3:2"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    for r in rows:
        for k in ("f1", "gamma1"):
            v = float(r[k])
            assert format(v, ".17g") == r[k]


def test_field_general_parameters(capsys):
    code, out, _ = run(["field", "--a1", "0.1", "--a2", "0.2", "--a3", "0.3", "--grid", "1:2:2",
                        "--format", "json"], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["schema"] == SCHEMA
    assert d["params"]["a2"] == 0.2
    assert len(d["rows"]) == 8


@pytest.mark.parametrize("argv", [["field", "--a", "0.7"], ["field", "--a", "0"], ["portrait", "--a", "0.5"],
                                  ["verify", "--a", "-0.1"]])
def test_invalid_parameter_exits_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert "(0,1/2)" in err


@pytest.mark.parametrize("argv", [["field", "--a", "0.2", "--grid", "1:2"], ["field", "--a", "0.2", "--grid", "2:1:3"],
                                  ["field"], ["bogus"], ["field", "--a", "abc"]])
def test_malformed_input_exits_2(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"a": 0.7, "grid": "1:1:1"}))
    assert run(["field", "--config", str(cfg)], capsys)[0] == 2
    code, out, _ = run(["field", "--config", str(cfg), "--a", "0.2"], capsys)
    assert code == 0
    assert len(out.strip().splitlines()) == 2
    assert run(["field", "--config", str(tmp_path / "missing.json")], capsys)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    assert run(["field", "--config", str(bad)], capsys)[0] == 2


def test_output_file_and_determinism(tmp_path, capsys):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["analyze", "--nu-grid", "1:3:21", "--a-grid", "0.22:0.24:3", "-o", str(p1)]) == 0
    assert main(["analyze", "--nu-grid", "1:3:21", "--a-grid", "0.22:0.24:3", "-o", str(p2)]) == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_analyze_rows(capsys):
    code, out, _ = run(["analyze", "--nu-grid", "1:2:11", "--a-grid", f"{3 / 14!r}:0.24:3"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0].keys()) == ANALYZE_HEADER
    f_rows = [r for r in rows if r["table"] == "F"]
    best = min(f_rows, key=lambda r: float(r["F"]))
    assert float(best["nu"]) == pytest.approx(4 / 3, abs=1e-15)
    assert float(best["F"]) == pytest.approx(3 / 14, abs=1e-12)
    roots = [r for r in rows if r["table"] == "roots"]
    assert float(roots[0]["nu1"]) == pytest.approx(4 / 3, abs=1e-9)
    assert float(roots[0]["nu2"]) == pytest.approx(4 / 3, abs=1e-9)
    last = roots[-1]
    assert float(last["a"]) == 0.24
    assert 1.0 < float(last["nu1"]) < float(last["nu2"]) < float("inf")
    eq = [r for r in rows if r["table"] == "equilibria"]
    assert {r["region"] for r in eq if r["which"] == "1"} == {"exterior", "boundary1", "interior"}


def test_portrait_degenerate_and_stable(capsys):
    code, out, _ = run(["portrait", "--a", "0.25", "--starts", "2", "--horizon", "5"], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["schema"] == SCHEMA
    assert d["degenerate"] is True
    assert len(d["equilibria"]) == 1 and d["equilibria"][0]["kind"] == "degenerate"
    assert (d["equilibria"][0]["x1"], d["equilibria"][0]["x2"]) == (1.0, 1.0)
    _, out, _ = run(["portrait", "--a", "0.3", "--starts", "2", "--horizon", "5"], capsys)
    d = json.loads(out)
    node = d["equilibria"][0]
    assert node["kind"] == "node" and node["stability"] == "stable"
    assert {e["kind"] for e in d["equilibria"][1:]} == {"saddle"}
    assert set(d["boundary"]) == {"s1", "s2", "s3"} and all(d["boundary"].values())
    assert set(d["invariant_curves"]) == {"c1", "c2", "c3"}


def test_portrait_tangency_markers(capsys):
    _, out, _ = run(["portrait", "--a", "0.2143", "--starts", "3", "--horizon", "5"], capsys)
    d = json.loads(out)
    marks = d["tangency_markers"]
    assert len(marks) == 6
    assert all(abs(m["nu"] - 4 / 3) < 0.05 for m in marks)
    assert len(d["trajectories"]) == 3


def test_verify_report_and_ivp(capsys):
    code, out, _ = run(["verify", "--a", "0.26", "--n", "3", "--ivp"], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["consistent"] is True and d["warnings"] == []
    assert d["reports"][0]["verdict"] == "Consistent(case=4)"
    assert d["ivp"]["mesh_index"] == 4961
    assert d["ivp"]["crossing"][0] == pytest.approx(1.000008792, abs=1e-8)


def test_verify_is_deterministic(capsys):
    _, out1, _ = run(["verify", "--a", "0.125", "--n", "4", "--seed", "7"], capsys)
    _, out2, _ = run(["verify", "--a", "0.125", "--n", "4", "--seed", "7"], capsys)
    assert out1 == out2


def test_verify_violation_exit_code(monkeypatch, capsys):
    class Stub:
        consistent = False
        inconclusive = []

        def to_dict(self):
            return {"a": 0.1, "case": 1, "verdict": "Violation(stub)", "crossing_counts": {}, "runs": []}

    monkeypatch.setattr(cli, "run_regime_experiment", lambda a, n, seed: Stub())
    code, out, _ = run(["verify", "--a", "0.1", "--n", "1"], capsys)
    assert code == 1
    assert json.loads(out)["consistent"] is False


def test_verify_inconclusive_warning(monkeypatch, capsys):
    class Stub:
        consistent = True
        inconclusive = [object()]

        def to_dict(self):
            return {"a": 0.1, "case": 1, "verdict": "Consistent(case=1)", "crossing_counts": {}, "runs": []}

    monkeypatch.setattr(cli, "run_regime_experiment", lambda a, n, seed: Stub())
    code, out, _ = run(["verify", "--a", "0.1", "--n", "1"], capsys)
    assert code == 0
    assert json.loads(out)["warnings"]


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "wallach_flow.cli", "field", "--a", "0.2", "--grid", "1:1:1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == ",".join(FIELD_HEADER)
