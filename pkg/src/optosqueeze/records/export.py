"""Plot-ready CSV exports and JSON result documents.

CSV files carry data only; the configuration that produced them goes into
a JSON sidecar next to them (`<stem>.meta.json`).
"""

import csv
import json
import logging
import math
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from optosqueeze.harness import (
    AveragePulseRow,
    CouplingScanPoint,
    FixedPulsePoint,
    SweepPoint,
)
from optosqueeze.squeezing import AngleLandscape

logger = logging.getLogger(__name__)

LANDSCAPE_CORNER = "theta_c\\theta_m"


def _number(value: float) -> str:
    """Shortest round-tripping representation; empty for NaN."""
    if isinstance(value, float) and math.isnan(value):
        return ""
    return repr(float(value))


def _write_rows(
    path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]
) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    logger.debug(f"Wrote {path}")
    return path


def write_json(path: Path, data: dict[str, Any]) -> Path:
    """Write a JSON document with sorted keys; non-finite numbers become null."""

    def clean(value: Any) -> Any:
        if isinstance(value, float) and not math.isfinite(value):
            return None
        if isinstance(value, dict):
            return {k: clean(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [clean(v) for v in value]
        if isinstance(value, np.ndarray):
            return clean(value.tolist())
        if isinstance(value, np.generic):
            return clean(value.item())
        return value

    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(clean(data), f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")
    logger.debug(f"Wrote {path}")
    return path


def write_sidecar(csv_path: Path, config: dict[str, Any], seed: int | None) -> Path:
    """Configuration and seed of a CSV file, in `<stem>.meta.json`."""
    document = {"config": config, "seed": seed}
    return write_json(csv_path.with_suffix(".meta.json"), document)


def write_landscape_csv(path: Path, landscape: AngleLandscape) -> Path:
    """grid_n + 1 rows and columns: theta_m header row, one row per theta_c."""
    header = [LANDSCAPE_CORNER] + [_number(t) for t in landscape.theta_m]
    rows = (
        [_number(tc)] + [_number(v) for v in row]
        for tc, row in zip(landscape.theta_c, landscape.values)
    )
    return _write_rows(path, header, rows)


def write_sweep_csv(path: Path, points: list[SweepPoint]) -> Path:
    """One row per heating rate: gamma_heat, best_db, mean_db."""
    rows = (
        [_number(p.gamma_heat), _number(p.best_db), _number(p.mean_db)] for p in points
    )
    return _write_rows(path, ["gamma_heat", "best_db", "mean_db"], rows)


def write_histogram_csv(
    path: Path, counts: Sequence[int], edges: Sequence[float]
) -> Path:
    rows = (
        [_number(lo), _number(hi), int(c)]
        for lo, hi, c in zip(edges[:-1], edges[1:], counts)
    )
    return _write_rows(path, ["bin_lo", "bin_hi", "count"], rows)


def write_average_pulse_csv(path: Path, rows: list[AveragePulseRow]) -> Path:
    """Per-knot mean and standard error; plots draw 5 x stderr bands."""
    data = ([r.profile, r.knot, _number(r.mean), _number(r.stderr)] for r in rows)
    return _write_rows(path, ["profile", "knot", "mean", "stderr"], data)


def write_samples_csv(path: Path, samples: Sequence[float]) -> Path:
    return _write_rows(path, ["s_gen_db"], ([_number(s)] for s in samples))


def write_fixed_pulse_csv(path: Path, points: list[FixedPulsePoint]) -> Path:
    rows = (
        [_number(p.g), _number(p.tau), _number(p.gamma_heat), _number(p.s_gen_db)]
        for p in points
    )
    return _write_rows(path, ["g", "tau", "gamma_heat", "s_gen_db"], rows)


def write_scan_csv(path: Path, points: list[CouplingScanPoint]) -> Path:
    rows = (
        [_number(p.g), _number(p.tau), _number(p.numeric_db), _number(p.rwa_db)]
        for p in points
    )
    return _write_rows(path, ["g", "tau", "numeric_db", "rwa_db"], rows)


def write_report_csv(path: Path, rows: list[dict[str, Any]]) -> Path:
    """Per-layout table: layout, n_runs, min_db, mean_db, max_db."""
    header = ["layout", "n_runs", "min_db", "mean_db", "max_db"]
    data = (
        [
            r["layout"],
            r["n_runs"],
            _number(r["min_db"]),
            _number(r["mean_db"]),
            _number(r["max_db"]),
        ]
        for r in rows
    )
    return _write_rows(path, header, data)
