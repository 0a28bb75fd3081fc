import json
import subprocess
import sys

import pytest

from exmop.cli import main
from exmop.verify.report import Report


@pytest.fixture
def outdir(tmp_path, monkeypatch):
    monkeypatch.setenv("EXMOP_OUT_DIR", str(tmp_path))
    return tmp_path


def run(*argv):
    return main(list(argv))


def test_example_run_writes_report_data_and_manifest(outdir, capsys):
    assert run("example", "run", "--id", "1", "--a", "2", "--max-n", "6", "--no-numeric") == 0
    assert Report.loads((outdir / "report-example1.json").read_text()).ok
    data = json.loads((outdir / "example1.json").read_text())
    assert data["schema"] == "exmop/1" and data["type"] == "example"
    manifest = json.loads((outdir / "manifest.json").read_text())
    assert [e["id"] for e in manifest["examples"]] == [1] and manifest["examples"][0]["gaps"] == [1]
    assert "exact-pass" in capsys.readouterr().out


def test_verify_commands(outdir):
    assert run("example", "run", "--id", "1", "--max-n", "7", "--no-numeric") == 0
    data = str(outdir / "example1.json")
    assert run("verify", "recurrence", "--in", data, "--band", "3") == 0
    assert run("verify", "recurrence", "--in", data, "--band", "1") == 1
    rep = Report.loads((outdir / "report-verify-recurrence.json").read_text())
    assert [c.witness for c in rep.failures()][0].startswith("n=0")
    for check in ("eigen", "orthogonality", "conjugation"):
        assert run("verify", check, "--in", data, "--npoints", "40") == 0, check


def test_family_build_and_symmetry(outdir):
    assert run("family", "build", "--kind", "hermite", "--params", "a=2,xi=1", "--max-n", "4") == 0
    path = str(outdir / "family-hermite.json")
    assert run("verify", "symmetry", "--in", path) == 1
    rep = Report.loads((outdir / "report-verify-symmetry.json").read_text())
    passed = {c.name: c.passed for c in rep.checks}
    assert passed["symmetry[D1]"] and passed["symmetry[D2]"] and not passed["symmetry[D3]"]


def test_export_weight_negative_grid(outdir):
    assert run("example", "run", "--id", "1", "--max-n", "3", "--no-numeric") == 0
    out = outdir / "w.csv"
    assert run("export", "weight", "--in", str(outdir / "example1.json"), "--grid", "-3:3:0.5", "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 14
    assert "0.0,0.125,0.0,0.0,0.375" in lines


def test_construction_failure_is_reported(outdir):
    assert run("example", "run", "--id", "1", "--a", "1", "--no-numeric") == 1
    rep = Report.loads((outdir / "report-example1.json").read_text())
    assert [c.name for c in rep.failures()] == ["construction"]


def test_usage_errors(outdir):
    assert run("example", "run", "--id", "1", "--zeta", "1") == 2


def test_unreadable_input_still_writes_report(outdir):
    assert run("verify", "recurrence", "--in", str(outdir / "missing.json")) == 1
    rep = Report.loads((outdir / "report-verify-recurrence.json").read_text())
    assert "cannot read" in rep.failures()[0].witness


def test_console_entry_point(outdir):
    proc = subprocess.run([sys.executable, "-m", "exmop.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "example" in proc.stdout
