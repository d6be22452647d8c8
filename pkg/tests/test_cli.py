import csv
import io
import json
import subprocess
import sys

import pytest

from nearbycycles.cli import main
from nearbycycles.report import Check, CheckReport, Outcome, run_checks


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_jacobi_value(capsys):
    code, rep = run_json(capsys, "jacobi", "--p", "5", "--m", "2")
    assert code == 0 and rep["pass"]
    assert rep["data"]["values"] == {"2": 5}
    assert set(rep) >= {"command", "params", "checks", "pass"}
    for c in rep["checks"]:
        assert set(c) == {"name", "expected", "actual", "provenance", "pass", "millis"}


def test_jacobi_j1_f3(capsys):
    code, rep = run_json(capsys, "jacobi", "--p", "3", "--m", "1")
    assert code == 0 and rep["data"]["values"] == {"1": -1}


def test_jacobi_extension_field_grid(capsys):
    code, rep = run_json(capsys, "jacobi", "--p", "3", "--k", "2")
    assert code == 0 and rep["data"]["values"] == {"1": 1, "2": 9, "3": 81, "4": 729}


@pytest.mark.parametrize("argv", [
    ("jacobi", "--p", "4", "--m", "1"),
    ("jacobi", "--p", "2"),
    ("quadric", "--p", "3", "--n", "3", "--form", "1,1"),
    ("quadric", "--p", "3", "--n", "2", "--form", "1,3"),
    ("localmodel", "--p", "3", "--n", "1"),
    ("jacobi", "--p", "3", "--m", "0"),
])
def test_invalid_input_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "invalid input" in err


def test_too_large_exit_code(capsys):
    code, _, err = run(capsys, "localmodel", "--p", "7", "--n", "4")
    assert code == 3 and "refused" in err
    code, _, _ = run(capsys, "localmodel", "--p", "3", "--n", "2", "--k", "3")
    assert code == 3


@pytest.mark.parametrize("form,count", [("split", 16), ("nonsplit", 10), ("1,1,-1,-1", 16)])
def test_quadric(capsys, form, count):
    code, rep = run_json(capsys, "quadric", "--p", "3", "--n", "4", "--form", form)
    assert code == 0 and rep["data"]["count"] == count


def test_quadric_odd(capsys):
    code, rep = run_json(capsys, "quadric", "--p", "3", "--n", "3")
    assert code == 0 and rep["data"]["count"] == 4


@pytest.mark.parametrize("n,form,points", [(3, "split", 13), (4, "split", 49), (4, "nonsplit", 31)])
def test_localmodel(capsys, n, form, points):
    code, rep = run_json(capsys, "localmodel", "--p", "3", "--n", str(n), "--form", form)
    assert code == 0 and rep["data"]["points"] == points
    assert any(c["name"].startswith("unique singular point") and c["pass"] for c in rep["checks"])


def test_nearby_cycles_odd(capsys):
    code, rep = run_json(capsys, "nearby-cycles", "--p", "3", "--n", "5")
    assert code == 0 and rep["data"]["stalks"] == {"0": [1]}


def test_nearby_cycles_split(capsys):
    code, rep = run_json(capsys, "nearby-cycles", "--p", "3", "--n", "4", "--form", "split")
    assert code == 0
    assert rep["data"]["stalks"] == {"0": [1], "3": [9]} and rep["data"]["trace"] == -8
    assert rep["flags"][0]["pass"]
    e2 = {(r["a"], r["b"]): r for r in rep["data"]["pages"]["E2_Z1"]}
    assert e2[(-1, 4)]["weights"] == [9]


def test_nearby_cycles_nonsplit_n6(capsys):
    code, rep = run_json(capsys, "nearby-cycles", "--p", "3", "--n", "6", "--form", "nonsplit")
    assert code == 0 and rep["data"]["stalks"]["5"] == [-27]


def test_rank_two_nonsplit_is_a_flag_not_a_failure(capsys):
    code, rep = run_json(capsys, "nearby-cycles", "--p", "3", "--n", "2", "--form", "nonsplit")
    assert code == 0 and rep["pass"]
    assert rep["flags"][0]["pass"] is False


def test_text_and_csv(capsys):
    code, out, _ = run(capsys, "quadric", "--p", "3", "--n", "4", "--format", "text")
    assert code == 0 and "PASS" in out and "overall: PASS" in out
    code, out, _ = run(capsys, "quadric", "--p", "3", "--n", "4", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and all(r["pass"] == "True" for r in rows)
    assert json.loads(rows[0]["params"])["n"] == 4


def test_json_is_stable(capsys):
    _, a, _ = run(capsys, "verify", "--suite", "spectral", "--format", "json")
    _, b, _ = run(capsys, "verify", "--suite", "spectral", "--format", "json")
    strip = lambda s: [{k: v for k, v in c.items() if k != "millis"} for c in json.loads(s)["checks"]]
    assert strip(a) == strip(b)
    assert list(json.loads(a)) == sorted(json.loads(a))


def test_output_dir_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("NEARBYCYCLES_OUTPUT_DIR", str(tmp_path))
    code, _, err = run(capsys, "verify", "--suite", "theorem", "--format", "json")
    assert code == 0
    assert json.loads((tmp_path / "verify.json").read_text())["pass"]
    explicit = tmp_path / "sub" / "r.csv"
    code, _, _ = run(capsys, "quadric", "--p", "5", "--n", "3", "--format", "csv", "--output", str(explicit))
    assert code == 0 and explicit.read_text().startswith("command,")


def test_jobs_preserve_order(capsys):
    _, serial = run_json(capsys, "verify", "--suite", "jacobi")
    _, parallel = run_json(capsys, "verify", "--suite", "jacobi", "--jobs", "3")
    assert [c["name"] for c in serial["checks"]] == [c["name"] for c in parallel["checks"]]
    assert parallel["pass"]


def _fails():
    return Outcome(1, 2)


def _raises():
    raise AssertionError("boom")


def test_failing_check_sets_exit_and_overall():
    rep = CheckReport("x", {}, run_checks([Check("a", "t", _fails), Check("b", "t", _raises)]))
    assert not rep.passed
    assert rep.checks[1].actual.startswith("AssertionError")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nearbycycles", "jacobi", "--p", "3", "--m", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "overall: PASS" in proc.stdout
