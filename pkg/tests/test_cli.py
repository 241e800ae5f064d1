import json
import subprocess
import sys

import numpy as np
import pytest

from traceineq.core import HermitianMatrix, write_matrix


def _run(*args):
    proc = subprocess.run([sys.executable, "-m", "traceineq.cli", *args],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


@pytest.fixture()
def matrices(tmp_path):
    x = tmp_path / "x.json"
    y = tmp_path / "y.json"
    h = tmp_path / "h.json"
    write_matrix(x, HermitianMatrix(np.diag([1.0, 4.0]).astype(complex)))
    write_matrix(y, HermitianMatrix(np.diag([9.0, 1.0]).astype(complex)))
    write_matrix(h, HermitianMatrix(np.array([[0.4, 0.1], [0.1, -0.3]],
                                             dtype=complex)))
    return {"x": str(x), "y": str(y), "h": str(h)}


def test_verify_pass_exit_zero():
    code, out, _ = _run("verify", "--suite", "classical", "--dim", "3",
                        "--trials", "50", "--seed", "7")
    assert code == 0
    assert out.rstrip().endswith("PASS")


def test_verify_failure_exit_one():
    # A negative tolerance demands a strictly positive normalized gap, which
    # identity checks cannot produce; this exercises the failure path.
    code, out, _ = _run("verify", "--check", "geomean-swap", "--trials", "5",
                        "--tol", "-1")
    assert code == 1
    assert out.rstrip().splitlines()[-1].startswith("FAIL: ")


def test_verify_bad_suite_exit_two():
    code, _, err = _run("verify", "--suite", "bogus")
    assert code == 2
    assert "bogus" in err


def test_verify_json_schema(tmp_path):
    out_file = tmp_path / "r.json"
    code, _, _ = _run("verify", "--suite", "log", "--trials", "10",
                      "--format", "json", "--out", str(out_file))
    assert code == 0
    reports = json.loads(out_file.read_text())
    assert len(reports) == 8
    assert all(r["failures"] == 0 for r in reports)


def test_verify_deterministic_across_jobs(tmp_path):
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    _run("verify", "--suite", "geometry", "--trials", "15", "--format",
         "json", "--out", str(f1), "--jobs", "1")
    _run("verify", "--suite", "geometry", "--trials", "15", "--format",
         "json", "--out", str(f2), "--jobs", "4")
    assert f1.read_bytes() == f2.read_bytes()


def test_compute_mean_oracle(matrices):
    code, out, _ = _run("compute", "mean", "--t", "0.5",
                        "--x", matrices["x"], "--y", matrices["y"])
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0].split()[0].startswith("3")
    assert rows[1].split()[1].startswith("2")


def test_compute_entropy_donald_matches_umegaki_commuting(matrices):
    code_u, out_u, _ = _run("compute", "entropy", "--kind", "umegaki",
                            "--x", matrices["x"], "--y", matrices["y"])
    code_d, out_d, _ = _run("compute", "entropy", "--kind", "donald",
                            "--x", matrices["x"], "--y", matrices["y"])
    assert code_u == 0 and code_d == 0
    vu = float(out_u.strip().splitlines()[0])
    vd = float(out_d.strip().splitlines()[0])
    assert vd == pytest.approx(vu, abs=1e-7)
    assert out_d.strip().splitlines()[1].startswith("residual=")


def test_compute_entropy_same_file_zero(matrices):
    code, out, _ = _run("compute", "entropy", "--kind", "umegaki",
                        "--x", matrices["x"], "--y", matrices["x"])
    assert code == 0
    assert float(out.strip()) == pytest.approx(0.0, abs=1e-10)


def test_compute_rejects_nonpositive(tmp_path, matrices):
    bad = tmp_path / "bad.json"
    write_matrix(bad, HermitianMatrix(np.diag([1.0, -1.0]).astype(complex)))
    code, _, err = _run("compute", "entropy", "--x", str(bad),
                        "--y", matrices["y"])
    assert code == 2
    assert err.startswith("error:")


def test_compute_missing_file_exit_two(matrices):
    code, _, _ = _run("compute", "distance", "--x", "/no/such/file.json",
                      "--y", matrices["y"])
    assert code == 2


def test_sweep_rows_and_determinism(tmp_path):
    f1 = tmp_path / "s1.csv"
    code, _, _ = _run("sweep", "--check", "log-y-sandwich", "--param", "p",
                      "--from", "0.5", "--to", "2", "--steps", "4",
                      "--trials", "20", "--out", str(f1))
    assert code == 0
    lines = f1.read_text().splitlines()
    assert lines[0] == "paramValue,trials,failures,minGap,medianGap"
    assert len(lines) == 5
    assert all(row.split(",")[2] == "0" for row in lines[1:])
    f2 = tmp_path / "s2.csv"
    _run("sweep", "--check", "log-y-sandwich", "--param", "p",
         "--from", "0.5", "--to", "2", "--steps", "4", "--trials", "20",
         "--out", str(f2))
    assert f1.read_bytes() == f2.read_bytes()


def test_sweep_bad_param_exit_two():
    code, _, _ = _run("sweep", "--check", "log-y-sandwich", "--param", "p",
                      "--from", "-2", "--to", "-1", "--steps", "2",
                      "--trials", "5")
    assert code == 2


def test_solve_donald_q_commuting(matrices, tmp_path):
    out_file = tmp_path / "q.json"
    code, out, _ = _run("solve", "donald-q", "--x", matrices["x"],
                        "--y", matrices["y"], "--out", str(out_file))
    assert code == 0
    assert "residual=" in out
    q = json.loads(out_file.read_text())
    # Commuting pair: Q = X Y^{-1} = diag(1/9, 4).
    entries = np.array([complex(re, im) for re, im in q["entries"]]).reshape(2, 2)
    assert np.allclose(entries, np.diag([1.0 / 9.0, 4.0]), atol=1e-8)


def test_solve_bs_r_identity(matrices, tmp_path):
    zero = tmp_path / "zero.json"
    write_matrix(zero, HermitianMatrix(np.zeros((2, 2), dtype=complex)))
    out_file = tmp_path / "r.json"
    code, out, _ = _run("solve", "bs-r", "--h", str(zero),
                        "--y", matrices["y"], "--out", str(out_file))
    assert code == 0
    r = json.loads(out_file.read_text())
    entries = np.array([complex(re, im) for re, im in r["entries"]]).reshape(2, 2)
    assert np.allclose(entries, np.eye(2), atol=1e-8)


def test_solve_phi_donald_certificate(matrices):
    code, out, _ = _run("solve", "phi-donald", "--h", matrices["h"],
                        "--y", matrices["y"])
    assert code == 0
    fields = dict(part.split("=") for part in out.split())
    value = float(fields["value"])
    assert float(fields["lower"]) <= value <= float(fields["upper"])
    assert float(fields["gap"]) <= 1e-5 * (1.0 + abs(value))
