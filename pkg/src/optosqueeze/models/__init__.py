"""Pydantic models for configuration files and persisted records.

This package contains the schema of experiment configuration documents and
of the line-delimited run records written by the command line.
"""

from optosqueeze.models.config import (
    BayesOptConfig,
    BoundsConfig,
    DetectionConfig,
    ExperimentConfig,
    NoiseConfig,
    PulseSpec,
    ScheduleConfig,
    SweepConfig,
    SystemConfig,
    apply_overrides,
    load_config,
)
from optosqueeze.models.records import EvaluationLine, RecordHeader, RunSummaryLine

__all__ = [
    # Configuration
    "ExperimentConfig",
    "SystemConfig",
    "ScheduleConfig",
    "PulseSpec",
    "BayesOptConfig",
    "DetectionConfig",
    "NoiseConfig",
    "SweepConfig",
    "BoundsConfig",
    "apply_overrides",
    "load_config",
    # Records
    "RecordHeader",
    "EvaluationLine",
    "RunSummaryLine",
]
