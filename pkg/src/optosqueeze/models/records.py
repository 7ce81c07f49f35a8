"""Pydantic models for persisted run records.

A run file holds one JSON object per line: a header with the resolved
configuration, one line per objective evaluation, and a closing summary.
Non-finite numbers are stored as null.
"""

from typing import Any, Literal

from pydantic import BaseModel, Field

from optosqueeze import constants


class RecordHeader(BaseModel):
    """First line of a run file."""

    kind: Literal["header"] = "header"
    schema_version: str = Field(constants.SCHEMA_VERSION, description="major.minor")
    name: str = Field(description="Run name, the file stem")
    seed: int = Field(description="Seed of the run")
    config: dict[str, Any] = Field(
        default_factory=dict, description="Fully resolved experiment configuration"
    )


class EvaluationLine(BaseModel):
    """One objective evaluation."""

    kind: Literal["evaluation"] = "evaluation"
    index: int
    phase: str
    vector: list[float]
    lambda_min: float | None = None
    s_gen: float | None = None
    status: str = "ok"
    error: str | None = None


class RunSummaryLine(BaseModel):
    """Last line of a run file."""

    kind: Literal["summary"] = "summary"
    seed: int
    layout: str
    schedule: list[int]
    params: dict[str, float]
    optimizer: str
    solver: str
    noise_sigma: float = 0.0
    n_evaluations: int
    n_failed: int
    best_vector: list[float] | None = None
    best_lambda_min: float | None = None
    best_s_gen: float | None = None
    best_tau: float | None = None
    best_knots: dict[str, list[float]] = Field(default_factory=dict)
    final_noiseless_s_gen: float | None = None
    incumbent_trace: list[float | None] = Field(default_factory=list)
    wall_time: float | None = None
