"""End-to-end tests of the command-line workflow.

Every command runs against the analytic solver with small occupations,
short schedules and a coarse output-mode grid.
"""

import csv
import json

import pytest

from optosqueeze.__main__ import EXIT_CONFIG, EXIT_OK, main

BASE = [
    "--override",
    "solver=rwa",
    "--override",
    "system.n_0=5",
    "--override",
    "system.n_th=5",
]
SMALL = [
    "--override",
    "schedule.n_initial=4",
    "--override",
    "schedule.n_explore=3",
    "--override",
    "schedule.n_exploit=2",
    "--override",
    "bayesopt.pool_size=200",
    "--override",
    "bayesopt.n_local=20",
]


@pytest.fixture(autouse=True)
def coarse_grid(monkeypatch):
    monkeypatch.setenv("OPTOSQUEEZE_FOUT_GRID_POINTS", "64")
    monkeypatch.setenv("OPTOSQUEEZE_WORKERS", "1")


def run(command: str, out, *extra: str) -> int:
    return main([command, "--out", str(out), *BASE, *extra])


def read_csv(path) -> list[list[str]]:
    with open(path, newline="") as f:
        return list(csv.reader(f))


def test_simulate_zero_coupling(tmp_path):
    """g = 0 gives an unsqueezed, physical state."""
    code = run(
        "simulate", tmp_path, "--override", "pulse.g=0", "--override", "pulse.tau=5"
    )
    assert code == EXIT_OK
    document = json.loads((tmp_path / "experiment-simulate.json").read_text())
    assert document["s_gen"] == pytest.approx(0.0, abs=1e-6)
    assert document["physical"] is True
    assert document["config"]["pulse"]["g"] == 0
    assert document["seed"] == 0
    assert len(document["covariance"]) == 4


def test_optimize_writes_runs_and_summary(tmp_path):
    code = run("optimize", tmp_path, *SMALL, "--repeats", "2", "--seed", "7")
    assert code == EXIT_OK

    runs = sorted(p.name for p in (tmp_path / "runs").iterdir())
    assert runs == ["experiment-seed7.jsonl", "experiment-seed8.jsonl"]
    lines = (tmp_path / "runs" / "experiment-seed7.jsonl").read_text().splitlines()
    assert len(lines) == 1 + 9 + 1

    summary = json.loads((tmp_path / "experiment-summary.json").read_text())
    assert summary["seed"] == 7
    assert summary["summary"]["seeds"] == [7, 8]
    stats = summary["summary"]
    assert stats["min_s_gen"] <= stats["mean_s_gen"] <= stats["max_s_gen"]

    histogram = read_csv(tmp_path / "experiment-histogram.csv")
    assert histogram[0] == ["bin_lo", "bin_hi", "count"]
    assert sum(int(row[2]) for row in histogram[1:]) == 2
    meta = json.loads((tmp_path / "experiment-histogram.meta.json").read_text())
    assert meta["seed"] == 7
    assert meta["config"]["repeats"] == 2
    assert (tmp_path / "experiment-average-pulse.csv").exists()


def test_optimize_is_byte_identical_across_invocations(tmp_path):
    """Same seeds, same files."""
    first, second = tmp_path / "a", tmp_path / "b"
    for out in (first, second):
        assert run("optimize", out, *SMALL, "--repeats", "2") == EXIT_OK
    for name in ("experiment-summary.json", "runs/experiment-seed0.jsonl"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_report_aggregates_stored_runs(tmp_path):
    assert run("optimize", tmp_path, *SMALL, "--repeats", "2") == EXIT_OK
    assert run("report", tmp_path) == EXIT_OK
    rows = read_csv(tmp_path / "report.csv")
    assert rows[0] == ["layout", "n_runs", "min_db", "mean_db", "max_db"]
    assert rows[1][:2] == ["const_coupling", "2"]


def test_fout_only_uses_stored_top_hat(tmp_path):
    """Without fixed values fout_only falls back to the best stored top-hat run."""
    fout_only = ["--override", "layout=fout_only", "--override", "n_knots=3"]
    assert run("optimize", tmp_path, *SMALL, *fout_only) == EXIT_CONFIG

    assert run("optimize", tmp_path, *SMALL) == EXIT_OK
    named = ["--override", "name=fout"]
    assert run("optimize", tmp_path, *SMALL, *fout_only, *named) == EXIT_OK
    summary = json.loads((tmp_path / "fout-summary.json").read_text())
    assert summary["layout"] == "fout_only"


def test_landscape_csv(tmp_path):
    code = run(
        "landscape",
        tmp_path,
        "--override",
        "pulse.tau=10",
        "--override",
        "detection.landscape_grid=6",
    )
    assert code == EXIT_OK
    rows = read_csv(tmp_path / "experiment-landscape.csv")
    assert len(rows) == 7
    assert all(len(row) == 7 for row in rows)
    assert (tmp_path / "experiment-landscape.meta.json").exists()


def test_detect_reports_both_occupations(tmp_path):
    code = run(
        "detect",
        tmp_path,
        "--override",
        "pulse.tau=10",
        "--override",
        "detection.landscape_grid=6",
    )
    assert code == EXIT_OK
    document = json.loads((tmp_path / "experiment-detect.json").read_text())
    entries = {e["label"]: e for e in document["entries"]}
    assert set(entries) == {"thermal", "cooled"}
    for entry in entries.values():
        assert isinstance(entry["trapped"], bool)
        assert entry["variance"] >= entry["lambda_min"] - 1e-9
    assert entries["cooled"]["n_0"] == 100.0
    assert (tmp_path / "experiment-landscape-cooled.csv").exists()


def test_sweep_tables(tmp_path):
    code = run(
        "sweep",
        tmp_path,
        *SMALL,
        "--override",
        "system.gamma=1e-3",
        "--override",
        "sweep.gamma_values=[0.01, 0.1]",
        "--override",
        "sweep.fixed_pulses=[[0.3, 10.0]]",
        "--override",
        "sweep.scan_g=[0.5]",
    )
    assert code == EXIT_OK

    sweep = read_csv(tmp_path / "experiment-sweep.csv")
    assert sweep[0] == ["gamma_heat", "best_db", "mean_db"]
    assert [row[0] for row in sweep[1:]] == ["0.01", "0.1"]
    fixed = read_csv(tmp_path / "experiment-fixed-pulses.csv")
    assert len(fixed) == 3
    scan = read_csv(tmp_path / "experiment-coupling-scan.csv")
    assert scan[0] == ["g", "tau", "numeric_db", "rwa_db"]
    assert len(scan) == 2
    runs = sorted(p.name for p in (tmp_path / "runs").iterdir())
    assert runs == ["experiment-gamma0-seed0.jsonl", "experiment-gamma1-seed1.jsonl"]


def test_noisy_writes_robustness_study(tmp_path):
    code = run("noisy", tmp_path, *SMALL, "--override", "noise.n_samples=10")
    assert code == EXIT_OK
    summary = json.loads((tmp_path / "experiment-summary.json").read_text())
    assert summary["rel_sigma"] == 0.1
    robustness = summary["robustness"]
    assert robustness["n_samples"] + robustness["n_failed"] == 10
    samples = read_csv(tmp_path / "experiment-noise-samples.csv")
    assert samples[0] == ["s_gen_db"]
    assert len(samples) == 1 + robustness["n_samples"]
