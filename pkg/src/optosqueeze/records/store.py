"""RunStore: persistence of run records as line-delimited JSON.

This module provides the RunStore class which handles:
- Saving a run record with its resolved configuration
- Loading records and rejecting unsupported schema versions
- Listing, deleting and querying stored runs
"""

import json
import logging
import math
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from optosqueeze import constants
from optosqueeze.exceptions import RecordVersionError
from optosqueeze.harness import EvaluationEntry, RunRecord
from optosqueeze.models import EvaluationLine, RecordHeader, RunSummaryLine

logger = logging.getLogger(__name__)


def _finite(value: float | None) -> float | None:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def run_name(name: str, seed: int) -> str:
    """File stem of one seeded run of an experiment."""
    return f"{name}-seed{seed}"


def record_to_lines(record: RunRecord, name: str, config: dict[str, Any]) -> list[str]:
    """Serialize a record into its header, evaluation and summary lines."""
    header = RecordHeader(name=name, seed=record.seed, config=config)
    evaluations = [
        EvaluationLine(
            index=e.index,
            phase=e.phase,
            vector=e.vector,
            lambda_min=_finite(e.lambda_min),
            s_gen=_finite(e.s_gen),
            status=e.status,
            error=e.error,
        )
        for e in record.evaluations
    ]
    summary = RunSummaryLine(
        seed=record.seed,
        layout=record.layout,
        schedule=list(record.schedule),
        params=record.params,
        optimizer=record.optimizer,
        solver=record.solver,
        noise_sigma=record.noise_sigma,
        n_evaluations=len(record.evaluations),
        n_failed=record.n_failed,
        best_vector=record.best_vector,
        best_lambda_min=_finite(record.best_lambda_min),
        best_s_gen=_finite(record.best_s_gen) if record.succeeded else None,
        best_tau=record.best_tau,
        best_knots=record.best_knots,
        final_noiseless_s_gen=_finite(record.final_noiseless_s_gen),
        incumbent_trace=[_finite(v) for v in record.incumbent_trace],
        wall_time=record.wall_time,
    )
    return [line.model_dump_json() for line in (header, *evaluations, summary)]


def _check_version(version: str) -> None:
    major = version.split(".")[0]
    if major != constants.SCHEMA_VERSION.split(".")[0]:
        raise RecordVersionError(
            f"Unsupported record schema version {version} "
            f"(supported: {constants.SCHEMA_VERSION})"
        )


def record_from_lines(lines: list[str]) -> tuple[RecordHeader, RunRecord]:
    """Parse the lines of a run file.

    Raises:
        RecordVersionError: If the major schema version is not supported.
        ValueError: If the file is not a complete run record.
    """
    objects = [json.loads(line) for line in lines if line.strip()]
    if not objects or objects[0].get("kind") != "header":
        raise ValueError("Run file does not start with a header line")
    _check_version(str(objects[0].get("schema_version", "")))
    if objects[-1].get("kind") != "summary":
        raise ValueError("Run file has no summary line")

    try:
        header = RecordHeader.model_validate(objects[0])
        summary = RunSummaryLine.model_validate(objects[-1])
        evaluations = [EvaluationLine.model_validate(o) for o in objects[1:-1]]
    except ValidationError as e:
        raise ValueError(f"Malformed run file: {e}") from e

    record = RunRecord(
        seed=summary.seed,
        layout=summary.layout,
        schedule=tuple(summary.schedule),
        params=summary.params,
        evaluations=[
            EvaluationEntry(
                index=e.index,
                phase=e.phase,
                vector=e.vector,
                lambda_min=e.lambda_min,
                s_gen=e.s_gen,
                status=e.status,
                error=e.error,
            )
            for e in evaluations
        ],
        incumbent_trace=[math.inf if v is None else v for v in summary.incumbent_trace],
        optimizer=summary.optimizer,
        solver=summary.solver,
        noise_sigma=summary.noise_sigma,
        best_vector=summary.best_vector,
        best_lambda_min=(
            math.inf if summary.best_lambda_min is None else summary.best_lambda_min
        ),
        best_s_gen=summary.best_s_gen or 0.0,
        best_tau=summary.best_tau,
        best_knots=summary.best_knots,
        final_noiseless_s_gen=summary.final_noiseless_s_gen,
        wall_time=summary.wall_time,
    )
    return header, record


class RunStore:
    """Manages run files in one directory.

    Each run lives in `<runs_dir>/<name>.jsonl`. Saving the same record
    under the same name rewrites the file byte for byte.
    """

    def __init__(self, runs_dir: Path):
        """Initialize the RunStore.

        Args:
            runs_dir: Directory where run files are stored
        """
        self.runs_dir = runs_dir
        self.runs_dir.mkdir(parents=True, exist_ok=True)

    def path_for(self, name: str) -> Path:
        return self.runs_dir / f"{name}.jsonl"

    def save(
        self, record: RunRecord, name: str, config: dict[str, Any] | None = None
    ) -> Path:
        """Write a run record.

        Args:
            record: The run record.
            name: File stem.
            config: Resolved configuration embedded in the header.

        Returns:
            Path of the written file.
        """
        path = self.path_for(name)
        lines = record_to_lines(record, name, config or {})
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write("\n".join(lines) + "\n")
        n = len(record.evaluations)
        logger.debug(f"Saved run {name} ({n} evaluations) to {path}")
        return path

    def load(self, name: str) -> tuple[RecordHeader, RunRecord]:
        """Load a run record.

        Raises:
            FileNotFoundError: If the run doesn't exist.
            RecordVersionError: If the schema version is unsupported.
        """
        path = self.path_for(name)
        if not path.exists():
            raise FileNotFoundError(f"Run {name} not found")
        with open(path, "r", encoding="utf-8") as f:
            return record_from_lines(f.read().splitlines())

    def list_runs(self) -> list[tuple[RecordHeader, RunRecord]]:
        """All readable runs, sorted by name. Unreadable files are skipped."""
        runs = []
        for path in sorted(self.runs_dir.glob("*.jsonl")):
            try:
                runs.append(self.load(path.stem))
            except (ValueError, json.JSONDecodeError) as e:
                logger.warning(f"Skipping run file {path.name}: {e}")
        logger.debug(f"Listed {len(runs)} runs in {self.runs_dir}")
        return runs

    def delete(self, name: str) -> None:
        """Delete a run.

        Raises:
            FileNotFoundError: If the run doesn't exist.
        """
        path = self.path_for(name)
        if not path.exists():
            raise FileNotFoundError(f"Run {name} not found")
        path.unlink()
        logger.info(f"Deleted run {name}")

    def best_record(self, layout: str, solver: str | None = None) -> RunRecord | None:
        """Stored run of a layout with the lowest minimal eigenvalue."""
        candidates = [
            record
            for _, record in self.list_runs()
            if record.layout == layout
            and record.succeeded
            and (solver is None or record.solver == solver)
        ]
        if not candidates:
            return None
        return min(candidates, key=lambda r: r.best_lambda_min)
