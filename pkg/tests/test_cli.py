import csv
import io
import json
import math
import os
import subprocess
import sys

import pytest

from klgamma.cli import dumps, run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_gamma_pair_json():
    code, out, _ = invoke("gamma", "--z", "-0.5", "--s", "0")
    assert code == 0
    d = json.loads(out)
    assert d["name"] == "gamma_pair"
    assert d["value"][0] == pytest.approx(4 * math.pi, rel=1e-14)


def test_gamma_complex_argument():
    code, out, _ = invoke("gamma", "--z", "0.5,0")
    assert json.loads(out)["value"][0] == pytest.approx(math.sqrt(math.pi), rel=1e-14)


def test_bessel():
    code, out, _ = invoke("bessel", "--kind", "k", "--order", "0.5", "--x", "1")
    assert code == 0
    assert json.loads(out)["value"][0] == pytest.approx(0.4610685044478947, rel=1e-14)
    code, out, _ = invoke("bessel", "--kind", "i", "--order", "0.5,0", "--x", "1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert float(rows[0]["value_re"]) == pytest.approx(0.93767488824548765, rel=1e-14)


def test_psi():
    code, out, _ = invoke("psi", "--z", "-0.5", "--n", "0", "--x", "1")
    d = json.loads(out)
    assert code == 0 and d["regime"] == "direct_bessel"
    assert d["value"][0] == pytest.approx(0.39809276980276543, rel=1e-13)


def test_psi_out_of_strip_exits_2():
    code, out, err = invoke("psi", "--z", "-0.3", "--n", "1", "--x", "1")
    assert code == 2 and out == ""
    assert err.count("\n") == 1 and "n=0" in err


def test_verify_kl():
    code, out, _ = invoke("verify", "--suite", "kl", "--tol", "1e-6")
    assert code == 0
    reps = json.loads(out)
    assert len(reps) == 25
    assert list(reps[0]) == ["name", "params", "lhs", "rhs", "abs_residual", "rel_residual", "converged"]
    assert all(r["rel_residual"] <= 1e-6 for r in reps)


def test_verify_failure_exit_1():
    code, out, _ = invoke("verify", "--suite", "mellin", "--tol", "1e-30")
    assert code == 1
    assert len(json.loads(out)) == 9


def test_verify_grid_file(tmp_path):
    grid = [
        {"name": "mellin", "params": {"z": [1.0, 0.5], "k": 0, "s": 1}},
        {"name": "kl_extended", "params": {"z": -1.25, "s": 0, "n": 0}},
    ]
    path = tmp_path / "grid.json"
    path.write_text(json.dumps(grid))
    code, out, _ = invoke("verify", "--grid", str(path))
    reps = json.loads(out)
    assert code == 1
    assert reps[0]["converged"] and "error" not in reps[0]["params"]
    assert reps[1]["params"]["error"] == "strip_mismatch" and not reps[1]["converged"]


@pytest.mark.parametrize("text", ["not json", '{"name": "x"}', '[{"params": {}}]'])
def test_malformed_grid_exit_2(tmp_path, text):
    path = tmp_path / "grid.json"
    path.write_text(text)
    code, _, err = invoke("verify", "--grid", str(path))
    assert code == 2 and err.count("\n") == 1


def test_fp_single():
    code, out, _ = invoke("fp", "--p", "-0.5", "--t", "0.25", "--y", "1", "--method", "single")
    d = json.loads(out)
    assert code == 0 and len(d["correction_terms"]) == 1
    assert list(d) == ["name", "params", "value", "correction_terms", "u_truncation", "est_error"]


def test_fp_precondition_exit_2():
    code, _, err = invoke("fp", "--p", "-0.5", "--t", "0.25", "--y", "1", "--method", "double")
    assert code == 2 and "p > 0" in err
    code, _, err = invoke("fp", "--p", "-2", "--t", "0.25", "--y", "1")
    assert code == 2 and "PoleError" in err


def test_fourier_csv():
    code, out, _ = invoke("fourier", "--a", "-0.5", "--xi-grid", "0:4:0.5", "--n", "0")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 9
    assert all(float(r["residual"]) <= 1e-7 for r in rows)
    assert float(rows[0]["closed"]) == pytest.approx(4 * math.pi * math.log(2), rel=1e-15)


def test_fourier_positive_a_uses_ramanujan():
    code, out, _ = invoke("fourier", "--a", "1", "--xi-grid", "0:2:1", "--format", "json")
    rows = json.loads(out)
    assert rows[0]["repr"] is None and rows[2]["residual"] <= 1e-8


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        [],
        ["gamma"],
        ["gamma", "--z", "1,2,3"],
        ["bessel", "--kind", "j", "--order", "1", "--x", "1"],
        ["bessel", "--kind", "k", "--order", "1", "--x", "-1"],
        ["fourier", "--a", "-0.5", "--xi-grid", "0:4"],
        ["verify", "--suite", "everything"],
        ["fp", "--p", "1", "--t", "0", "--y", "1"],
    ],
)
def test_usage_errors(argv):
    code, out, err = invoke(*argv)
    assert code == 2 and out == ""
    assert err.startswith("klgamma: error:") and err.count("\n") == 1


def test_output_file(tmp_path):
    path = tmp_path / "out.json"
    code, out, _ = invoke("gamma", "--z", "1", "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["value"] == [1.0, 0.0]


def test_human_format():
    code, out, _ = invoke("verify", "--suite", "mellin", "--format", "human")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 10 and lines[0].startswith("name")


def test_json_determinism_and_threads(monkeypatch):
    a = invoke("verify", "--suite", "mellin")[1]
    b = invoke("verify", "--suite", "mellin", "--threads", "3")[1]
    monkeypatch.setenv("KLGAMMA_THREADS", "2")
    c = invoke("verify", "--suite", "mellin")[1]
    assert a == b == c


def test_dumps_floats_round_trip():
    vals = [0.1, 1 / 3, 1e-300, 2.0 ** 0.5, complex(1e-17, -3.3)]
    back = json.loads(dumps(vals))
    assert back[:4] == vals[:4] and back[4] == [1e-17, -3.3]
    assert json.loads(dumps([math.nan, math.inf])) == [None, None]


def test_console_script_entry_point():
    env = dict(os.environ)
    r = subprocess.run([sys.executable, "-m", "klgamma.cli", "gamma", "--z", "1"], capture_output=True, text=True, env=env)
    assert r.returncode == 0 and json.loads(r.stdout)["value"] == [1.0, 0.0]
    r = subprocess.run([sys.executable, "-m", "klgamma.cli", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "verify" in r.stdout
