import json
import math
import os
import subprocess
import sys
from pathlib import Path

import pytest

from lidstone import cli
from lidstone.errors import OrderUndetermined

JOBS = Path(__file__).resolve().parent.parent / "jobs"
JOB_FILES = sorted(JOBS.glob("*.json"))


def load(name):
    return json.loads((JOBS / name).read_text())


def run_cli(*args, stdin=None, env=None):
    return subprocess.run([sys.executable, "-m", "lidstone", *args], input=stdin,
                          capture_output=True, text=True, env=env)


def test_basis_report():
    report, code = cli.run(load("basis_lidstone.json"))
    assert code == 0 and report["D"] == "1"
    lam = {(e["n"], e["j"]): e["poly"] for e in report["lambda"]}
    assert lam[1, 1]["text"] == "(-1/6)z + (1/6)z^3"
    assert lam[1, 1]["coeffs"] == ["0", "-1/6", "0", "1/6"]


def test_delta_report():
    report, code = cli.run(load("delta_whittaker.json"))
    assert code == 0 and report["origin_order"] == 0
    assert abs(report["zero_free_radius"] - math.pi / 2) < 1e-9


def test_classify_report():
    report, code = cli.run(load("classify_sin_pi.json"))
    assert code == 0
    assert report["verdict"]["outcome"] == "hypotheses_violated"
    assert report["verdict"]["reason"] == "type"
    job = dict(load("classify_sin_pi.json"), function={"kind": "sin_pi", "params": {"a": 1}})
    assert cli.run(job)[0]["verdict"]["reason"] == "type"
    job["function"] = {"kind": "sin_pi", "params": {"a": {"re": 1, "im": 1}}}
    assert cli.run(job)[1] == 2


def test_expand_and_gontcharoff_reports(tmp_path):
    report, code = cli.run(load("expand_sin.json"), str(tmp_path))
    assert code == 0
    for e in report["evaluations"]:
        assert float(e["error"]) <= float(e["remainder_bound"])
    assert len(report["coeffs"]) == 7
    assert (tmp_path / "coefficients.csv").read_text().startswith("n,j,re,im")
    assert len((tmp_path / "partial_sums.csv").read_text().splitlines()) == 3
    report, code = cli.run(load("gontcharoff_exp.json"))
    assert code == 0
    assert report["omega"][2]["poly"]["coeffs"] == ["0", "-1", "1/2"]


@pytest.mark.parametrize("path", JOB_FILES, ids=lambda p: p.stem)
def test_round_trip_and_determinism(path):
    job = json.loads(path.read_text())
    first = cli.dumps(cli.run(job)[0])
    assert cli.dumps(json.loads(first)) == first
    assert cli.dumps(cli.run(job)[0]) == first


def test_fixed_number_formatting():
    assert cli.fmt_real(0.1) == "0.10000000000000001"
    assert cli.fmt_complex(1 - 2j) == {"re": "1", "im": "-2"}
    with pytest.raises(ValueError):
        cli.dumps({"x": float("nan")})


def test_exact_values():
    assert cli.exact_value("3/4") == cli.exact_value(0.75)
    assert cli.exact_value({"re": "1/2", "im": 2}).imag == 2
    assert cli.approx_value("pi/2") == pytest.approx(math.pi / 2)
    assert cli.approx_value("-2pi") == pytest.approx(-2 * math.pi)
    for bad in (True, "x/2", {"re": "1/0", "im": 0}):
        with pytest.raises(cli.JobError):
            cli.exact_value(bad)


@pytest.mark.parametrize("job", [
    {},
    {"command": "nope"},
    {"command": "basis"},
    {"command": "expand", "nodes": {"s": ["0", "1"], "r": [0, 0]}, "function": {"kind": "sin"}},
    {"command": "basis", "nodes": {"s": ["0"], "r": [0]}, "extra": 1},
    {"command": "basis", "nodes": {"s": ["0", "1"], "r": [0]}},
    {"command": "basis", "nodes": {"s": ["0", "1"], "r": [0, 2]}},
    {"command": "classify", "function": {"kind": "tan"}},
    {"command": "gontcharoff", "sequence": {"rule": "periodic", "values": [0, 1], "A": 0.5}, "N": 2},
    {"command": "classify", "function": {"kind": "sin"}, "config": {"int_tol": 0.7}},
    {"command": "classify", "function": {"kind": "sin"}, "mode": "products"},
])
def test_malformed_jobs_exit_2(job):
    report, code = cli.run(job)
    assert code == 2 and report["error"]["exit_code"] == 2 and report["error"]["message"]


def test_precondition_exit_3():
    job = {"command": "basis", "nodes": {"s": ["0", "0"], "r": [0, 0]}}
    report, code = cli.run(job)
    assert code == 3 and report["error"]["type"] == "SingularSystem"
    assert "D(s) = 0" in report["error"]["message"]
    job = {"command": "expand", "function": {"kind": "sin", "params": {"a": "pi"}},
           "nodes": {"s": ["0", "1"], "r": [0, 0]}, "N": 5}
    report, code = cli.run(job)
    assert code == 3 and report["error"]["type"] == "TypeTooLarge"


def test_numerical_failure_exit_4(monkeypatch):
    def boom(job, csv_dir):
        raise OrderUndetermined("no dominant Taylor coefficient")

    monkeypatch.setitem(cli.COMMANDS, "delta", boom)
    report, code = cli.run(load("delta_whittaker.json"))
    assert code == 4 and report["error"]["type"] == "OrderUndetermined"


def test_main_stdin_out_and_csv(tmp_path):
    out = tmp_path / "report.json"
    proc = run_cli("-", "--out", str(out), "--csv", str(tmp_path / "csv"),
                   stdin=(JOBS / "expand_sin.json").read_text())
    assert proc.returncode == 0 and proc.stdout == ""
    assert json.loads(out.read_text())["command"] == "expand"
    assert (tmp_path / "csv" / "coefficients.csv").exists()


def test_main_exit_codes_and_stderr(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    proc = run_cli(str(bad))
    assert proc.returncode == 2 and "JSONDecodeError" in proc.stderr
    proc = run_cli("-", stdin='{"command": "basis", "nodes": {"s": ["1", "1"], "r": [0, 0]}}')
    assert proc.returncode == 3 and "SingularSystem" in proc.stderr
    assert json.loads(proc.stdout)["error"]["exit_code"] == 3


def test_worker_count_does_not_change_reports():
    env = dict(os.environ, LIDSTONE_WORKERS="4")
    job = str(JOBS / "expand_sin.json")
    assert run_cli(job, env=env).stdout == run_cli(job).stdout
