"""End-to-end checks of the command line tool: exit codes, file outputs,
byte-level reproducibility, and agreement with the core library."""

import csv
import math
import os
import subprocess
import sys

import pytest

CLI = os.environ.get("HFOCK_CLI")

pytestmark = pytest.mark.skipif(CLI is None, reason="HFOCK_CLI not set")


def run(*args, env_extra=None, cwd=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run([CLI, *args], capture_output=True, text=True, env=env, cwd=cwd)


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, data = rows[0], rows[1:]
    return header, [[float(x) for x in row] for row in data]


def test_help_exits_zero():
    assert run("--help").returncode == 0


def test_invalid_physics_is_exit_2(tmp_path):
    out = tmp_path / "x.csv"
    assert run("fidelity-sweep", "--eps-over-gamma", "0.7", "--out", str(out)).returncode == 2
    assert run("two-mode", "--r", "0.5", "--eta-s", "1.4", "--out", str(out)).returncode == 2


def test_two_mode_value(tmp_path):
    out = tmp_path / "tm.csv"
    res = run("two-mode", "--r", "0.5", "--out", str(out))
    assert res.returncode == 0
    header, data = read_csv(out)
    assert header == ["n", "p_n"]
    p2 = data[2][1]
    assert p2 == pytest.approx(1.0 / math.cosh(0.5) ** 6, rel=1e-10)
    assert data[0][1] == 0.0 and data[1][1] == 0.0


def test_fock3_endpoints(tmp_path):
    out = tmp_path / "f3.csv"
    res = run("fock-n", "--n", "3", "--pattern", "equal", "--range", "0:40:40",
              "--out", str(out))
    assert res.returncode == 0
    _, data = read_csv(out)
    assert data[0][1] == pytest.approx(1.0, abs=1e-9)
    assert data[1][1] == pytest.approx(2.0 / 9.0, abs=2e-3)


def test_sweep_matches_core_and_is_reproducible(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ("fidelity-sweep", "--eps-over-gamma", "0", "--dt-range", "0:2:1",
            "--mode", "optimized")
    assert run(*args, "--out", str(a)).returncode == 0
    assert run(*args, "--out", str(b)).returncode == 0
    assert a.read_bytes() == b.read_bytes()

    # single-thread run is byte-identical too
    c = tmp_path / "c.csv"
    assert run(*args, "--out", str(c), env_extra={"HERALDED_FOCK_THREADS": "1"}).returncode == 0
    assert a.read_bytes() == c.read_bytes()

    # values delegate to the core library
    sys.path.insert(0, os.environ.get("PYTHONPATH", ""))
    hf = pytest.importorskip("heralded_fock")
    _, data = read_csv(a)
    for gamma_dt, f2 in data:
        assert f2 == pytest.approx(hf.fidelity_two_photon_low_intensity(gamma_dt), rel=1e-12)


def test_optimize_mode_json(tmp_path):
    import json

    out = tmp_path / "om.json"
    res = run("optimize-mode", "--eps-over-gamma", "0.05", "--dt", "2", "--format", "json",
              "--out", str(out))
    assert res.returncode == 0
    j = json.loads(out.read_text())
    assert j["metadata"]["version"]
    assert j["columns"] == ["t", "f_optimized", "f_zero_intensity"]
    fopt = j["metadata"]["params"]["F2_optimized"]
    ffix = j["metadata"]["params"]["F2_zero_intensity_mode"]
    assert 0.0 < ffix <= fopt <= 1.0


def test_wick_check(tmp_path):
    out = tmp_path / "wick.csv"
    res = run("wick-check", "--configs", "10", "--out", str(out))
    assert res.returncode == 0
    assert "moment identity" in res.stdout


def test_config_file(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("eta-s=0.8\n")
    out = tmp_path / "tm.csv"
    res = run("two-mode", "--r", "0.3", "--config", str(cfg), "--out", str(out))
    assert res.returncode == 0
