import csv
import os
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("AOICACHE_CLI", "aoicache")
DATA = Path(os.environ.get("AOICACHE_TEST_DATA", Path(__file__).resolve().parents[1] / "data"))


def run(*args, env=None, cwd=None):
    merged = dict(os.environ)
    merged.pop("AOICACHE_OUT_DIR", None)
    merged.update(env or {})
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, env=merged, cwd=cwd, timeout=600)


def report(stdout):
    values = {}
    for line in stdout.splitlines():
        key, sep, value = line.partition(": ")
        if sep:
            values[key] = value
    return values


def policy_rows(stdout):
    lines = stdout.splitlines()
    start = lines.index("file,p,lambda,tau")
    return list(csv.DictReader(lines[start:]))


def test_solve_kkt_symmetric():
    result = run("solve", DATA / "symmetric.cfg", "--method", "kkt")
    assert result.returncode == 0, result.stderr
    lambdas = [float(r["lambda"]) for r in policy_rows(result.stdout)]
    assert lambdas == pytest.approx([0.5, 0.5], abs=1e-12)
    assert "waterlevel" in report(result.stdout)


def test_solve_sqrt_from_config_method():
    result = run("solve", DATA / "skewed.cfg")
    assert result.returncode == 0, result.stderr
    lambdas = [float(r["lambda"]) for r in policy_rows(result.stdout)]
    assert lambdas == pytest.approx([2 / 3, 1 / 3], abs=1e-12)


def test_brb_matches_kkt_on_fig4_n3():
    brb = run("solve", DATA / "fig4_n3.cfg", "--method", "brb")
    kkt = run("solve", DATA / "fig4_n3.cfg", "--method", "kkt")
    assert brb.returncode == 0 and kkt.returncode == 0
    a = float(report(brb.stdout)["objective"])
    b = float(report(kkt.stdout)["objective"])
    assert abs(a - b) / b <= 1e-3


def test_simulate_single_file(tmp_path):
    result = run("simulate", DATA / "single.cfg", "--verify", "--out", tmp_path)
    assert result.returncode == 0, result.stderr
    values = report(result.stdout)
    assert abs(float(values["simulated_aoi"]) - 1.5) <= 2 / 1000
    assert values["verify"] == "ok"
    with open(tmp_path / "trace.csv") as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 1000
    assert rows[0] == {"file_index": "1", "start_time": "0", "duration": "1", "aoi_at_start": "0"}
    with open(tmp_path / "summary.csv") as handle:
        header = handle.readline().strip()
    assert header == "file_index,p,lambda_target,tau_target,utilization_measured,avg_aoi"


def test_simulate_flags_and_env_out_dir(tmp_path):
    result = run("simulate", DATA / "symmetric.cfg", "--T", "200", "--scheduler", "roundrobin", "--no-trace",
                 env={"AOICACHE_OUT_DIR": str(tmp_path)})
    assert result.returncode == 0, result.stderr
    values = report(result.stdout)
    assert values["scheduler"] == "roundrobin"
    assert values["horizon"] == "200"
    assert (tmp_path / "summary.csv").exists()
    assert not (tmp_path / "trace.csv").exists()


def test_simulate_fig4_gap_is_reported(tmp_path):
    result = run("simulate", DATA / "fig4_n5.cfg", "--no-trace", "--out", tmp_path)
    assert result.returncode == 0, result.stderr
    assert 0 <= float(report(result.stdout)["relative_gap"]) < 0.15


def test_reproduce_fig3(tmp_path):
    result = run("reproduce", "--figure", "fig3", "--out", tmp_path, "--T", "2000")
    assert result.returncode == 0, result.stderr
    with open(tmp_path / "fig3.csv") as handle:
        rows = list(csv.DictReader(handle))
    assert [int(r["N"]) for r in rows] == list(range(2, 51, 2))
    for row in rows:
        assert float(row["obj_relaxed_opt"]) <= float(row["obj_relaxed_sqrt"]) * (1 + 1e-12)


def test_reproduce_is_deterministic(tmp_path):
    for sub in ("a", "b"):
        assert run("reproduce", "--figure", "fig6", "--out", tmp_path / sub, "--T", "2000").returncode == 0
    assert (tmp_path / "a" / "fig6.csv").read_bytes() == (tmp_path / "b" / "fig6.csv").read_bytes()
    with open(tmp_path / "a" / "fig6.csv") as handle:
        rows = list(csv.DictReader(handle))
    assert sum(float(r["lambda_opt"]) for r in rows) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize(
    "args",
    [
        ["solve", DATA / "bad_model.cfg"],
        ["solve", DATA / "symmetric.cfg", "--method", "newton"],
        ["solve", DATA / "symmetric.cfg", "--set", "colour=red"],
        ["solve", "/nonexistent.cfg"],
        ["reproduce", "--figure", "fig9"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_2(args):
    result = run(*args)
    assert result.returncode == 2
    assert result.stderr


def test_numerical_failure_exits_3():
    result = run("solve", DATA / "fig4_n3.cfg", "--method", "kkt", "--set", "tolerance=1e-300")
    assert result.returncode == 3
    assert result.stderr


def test_help_exits_0():
    assert run("--help").returncode == 0
