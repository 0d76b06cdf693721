import io
import json
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pytest

from utgraded import Rationals, cyclic_group, elementary_grading, serial
from utgraded.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def run_cli(*args):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(args))
    return code, out.getvalue(), err.getvalue()


@pytest.fixture()
def grading_file(tmp_path):
    Q = Rationals()
    g = elementary_grading(Q, cyclic_group(2), [1, 1], [0, 1])
    path = tmp_path / "g.json"
    serial.write_file(path, serial.grading_to_json(g))
    return path


def test_validate_ok(grading_file):
    code, out, err = run_cli("validate", "-i", str(grading_file))
    assert code == 0
    payload = json.loads(out)
    assert payload["valid"] is True
    assert payload["dim"] == 3
    assert payload["components"] == [{"degree": 0, "dim": 2},
                                     {"degree": 1, "dim": 1}]


def test_validate_invalid_exits_1(tmp_path, grading_file):
    obj = serial.read_file(grading_file)
    obj["basis"] = obj["basis"][:2]
    bad = tmp_path / "bad.json"
    serial.write_file(bad, obj)
    code, out, err = run_cli("validate", "-i", str(bad))
    assert code == 1
    assert json.loads(err)["error"]["code"] == "NotABasis"


def test_missing_input_exits_2(tmp_path):
    code, out, err = run_cli("validate", "-i", str(tmp_path / "nope.json"))
    assert code == 2
    assert json.loads(err)["error"]["code"] == "UsageError"


def test_decompose_check_and_determinism(tmp_path, grading_file):
    out1 = tmp_path / "cf1.json"
    out2 = tmp_path / "cf2.json"
    code, stdout, _ = run_cli("decompose", "-i", str(grading_file),
                              "-o", str(out1), "--check")
    assert code == 0
    payload = json.loads(stdout)
    cert = payload["certificate"]
    assert cert["radical_graded"] and cert["psi_hom"] and cert["checked"]
    code, stdout2, _ = run_cli("decompose", "-i", str(grading_file),
                               "-o", str(out2), "--check")
    assert code == 0 and stdout == stdout2
    assert out1.read_bytes() == out2.read_bytes()


def test_generate_and_verify_iso(tmp_path):
    plan_path = FIXTURES / "plan_pauli.json"
    gpath = tmp_path / "gen.json"
    ppath = tmp_path / "plant.json"
    code, stdout, _ = run_cli("generate", "--plan", str(plan_path),
                              "-o", str(gpath), "--plant", str(ppath))
    assert code == 0
    # the planted canonical form's psi is a graded iso onto the instance
    code, stdout, _ = run_cli("verify-iso", "-a", str(ppath), "-b", str(gpath))
    assert code == 0
    assert json.loads(stdout)["iso"] is True


def test_verify_iso_corrupted_map(tmp_path):
    plan_path = FIXTURES / "plan_pauli.json"
    gpath = tmp_path / "gen.json"
    ppath = tmp_path / "plant.json"
    run_cli("generate", "--plan", str(plan_path), "-o", str(gpath),
            "--plant", str(ppath))
    plant = serial.read_file(ppath)
    field_obj = plant["field"]
    matrix = plant["psi_matrix"]
    matrix[0][0] = "7/2" if field_obj["kind"] == "Q" else 7
    mpath = tmp_path / "map.json"
    serial.write_file(mpath, {"format": 1, "kind": "graded_map",
                              "matrix": matrix})
    code, stdout, err = run_cli("verify-iso", "-a", str(ppath),
                                "-b", str(gpath), "-m", str(mpath))
    assert code == 1
    payload = json.loads(err)["error"]
    assert payload["code"] == "NotGradedIso"
    assert "witness" in payload or "check" in payload


def test_sweep(tmp_path):
    plans_dir = tmp_path / "plans"
    plans_dir.mkdir()
    for name in ("plan_pauli.json", "plan_elementary.json"):
        (plans_dir / name).write_bytes((FIXTURES / name).read_bytes())
    report_path = tmp_path / "report.json"
    code, stdout, err = run_cli("sweep", "--plans", str(plans_dir),
                                "--report", str(report_path))
    assert code == 0
    report = serial.read_file(report_path)
    assert report["failures"] == 0 and report["total"] == 2
    assert json.loads(stdout)["ok"] is True


def test_cli_entrypoint_subprocess(grading_file):
    proc = subprocess.run(
        [sys.executable, "-m", "utgraded.cli", "validate", "-i",
         str(grading_file)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["valid"] is True


def test_usage_error_exit_code():
    proc = subprocess.run(
        [sys.executable, "-m", "utgraded.cli", "frobnicate"],
        capture_output=True, text=True)
    assert proc.returncode == 2
