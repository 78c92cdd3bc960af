"""Command-line interface: exit codes, artifacts, determinism."""

import json

import pytest

from qpskit.cli import main


def run(args):
    return main(args)


def test_verify_boost_exit_zero(capsys):
    assert run(["verify", "boost"]) == 0
    out = capsys.readouterr().out
    assert "boost_matrix: 19 passed, 0 failed" in out


def test_verify_emrelation_failure_writes_report(tmp_path, capsys):
    out = tmp_path / "em.json"
    code = run(["verify", "emrelation", "--h", "Lam*omega + P1",
                "--out", str(out)])
    assert code == 1
    doc = json.loads(out.read_text())
    assert doc["failed"] > 0
    failing = [e for e in doc["entries"] if not e["pass"]]
    assert failing and all(e["residual"] not in ("", "0") for e in failing)


def test_verify_emrelation_pass(tmp_path):
    out = tmp_path / "em.json"
    assert run(["verify", "emrelation", "--h", "Lam*omega",
                "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["failed"] == 0 and doc["passed"] == 101


def test_verify_emrelation_scaled(tmp_path):
    out = tmp_path / "em2.json"
    assert run(["verify", "emrelation", "--h", "Lam*omega",
                "--mass-factor", "2", "--out", str(out)]) == 0


def test_verify_bad_expression_usage_error(capsys):
    assert run(["verify", "emrelation", "--h", "Lam*("]) == 2
    assert "error" in capsys.readouterr().err


def test_bad_flags_exit_two():
    with pytest.raises(SystemExit) as exc:
        run(["verify", "poincare", "--nonsense"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(["verify", "nosuchsuite"])
    assert exc.value.code == 2


def test_csv_format(tmp_path):
    out = tmp_path / "boost.csv"
    assert run(["verify", "boost", "--out", str(out), "--format", "csv"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "id,pass,asserted,lhs,expected,residual"
    assert len(lines) == 20


def test_localize_artifacts_and_determinism(tmp_path, capsys):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = ["localize", "--m", "1", "--sigma", "0.1", "--t", "5",
            "--npts", "2048", "--pmax", "40", "--seed", "7"]
    assert run(args + ["--out", str(out1)]) == 0
    summary1 = capsys.readouterr().out
    assert run(args + ["--out", str(out2)]) == 0
    summary2 = capsys.readouterr().out
    assert out1.read_bytes() == out2.read_bytes()
    assert summary1 == summary2
    doc = json.loads((tmp_path / "a.json").read_text())
    assert doc["outside_cone_probability"] > 0
    assert doc["params"]["sigma"] == 0.1
    header, first = out1.read_text().splitlines()[:2]
    assert header == "x,t,density"
    assert len(first.split(",")) == 3


def test_localize_wraparound_is_usage_error(capsys):
    code = run(["localize", "--t", "500", "--npts", "2048", "--pmax", "40"])
    assert code == 2
    assert "box" in capsys.readouterr().err


def test_causality_defaults(tmp_path):
    out = tmp_path / "caus.json"
    assert run(["causality", "--npts", "1024", "--pmax", "20",
                "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    by_id = {e["id"]: e for e in doc["entries"]}
    assert by_id["equal_time"]["pass"]
    assert by_id["unequal_time"]["pass"]


def test_causality_timelike_not_asserted(tmp_path):
    out = tmp_path / "caus2.json"
    # overlapping light cones: |t'-t| exceeds the spatial gap
    code = run(["causality", "--npts", "1024", "--pmax", "20",
                "--r", "-1.5", "-1.0", "--rp", "1.0", "1.5", "--trp", "5.0",
                "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    entry = [e for e in doc["entries"] if e["id"] == "unequal_time"][0]
    assert entry.get("asserted", True) is False


def test_fock_subcommands(tmp_path):
    assert run(["fock", "duality"]) == 0
    assert run(["fock", "spectrum"]) == 0
    out = tmp_path / "fock.csv"
    assert run(["fock", "expectation", "--format", "csv",
                "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,vacuum_sq,one_particle_sq,difference,predicted"
    assert len(lines) == 9


def test_numeric_casimir_small(tmp_path):
    out = tmp_path / "cas.json"
    assert run(["numeric", "casimir", "--npts", "16", "--pmax", "2.0",
                "--nstates", "2", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["failed"] == 0


def test_verify_report_determinism(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert run(["verify", "pl", "--out", str(a)]) == 0
    assert run(["verify", "pl", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
