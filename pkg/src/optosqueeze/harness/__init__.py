"""Experiment harness for optosqueeze.

This package maps optimization vectors to pulses, scores them, and runs
the optimization studies: single and repeated runs, control-noise runs,
heating-rate sweeps, coupling scans and detection-angle studies.
"""

from optosqueeze.harness.experiments import (
    coupling_scan,
    detection_entry,
    detection_study,
    fixed_pulse_sweep,
    noise_robustness,
    noisy_optimize,
    optimize_once,
    params_at_heating_rate,
    repeat_optimize,
    stable_initial_occupation,
    summarize_records,
    thermal_sweep,
)
from optosqueeze.harness.layouts import (
    LayoutBounds,
    VariableLayout,
    default_detuning_bounds,
    make_layout,
)
from optosqueeze.harness.objective import (
    PulseObjective,
    decode_and_evaluate,
    perturb_coupling,
    simulate_pulse,
)
from optosqueeze.harness.types import (
    LAYOUT_KINDS,
    AveragePulseRow,
    CouplingScanPoint,
    DetectionEntry,
    DetectionReport,
    EvaluationEntry,
    FixedPulsePoint,
    NoiseStudy,
    RepeatSummary,
    RunOptions,
    RunRecord,
    SweepPoint,
)

__all__ = [
    # Types
    "LAYOUT_KINDS",
    "RunOptions",
    "EvaluationEntry",
    "RunRecord",
    "AveragePulseRow",
    "RepeatSummary",
    "SweepPoint",
    "NoiseStudy",
    "DetectionEntry",
    "DetectionReport",
    "CouplingScanPoint",
    "FixedPulsePoint",
    # Layouts
    "LayoutBounds",
    "VariableLayout",
    "make_layout",
    "default_detuning_bounds",
    # Objective
    "simulate_pulse",
    "decode_and_evaluate",
    "perturb_coupling",
    "PulseObjective",
    # Experiments
    "optimize_once",
    "noisy_optimize",
    "repeat_optimize",
    "summarize_records",
    "thermal_sweep",
    "params_at_heating_rate",
    "stable_initial_occupation",
    "fixed_pulse_sweep",
    "coupling_scan",
    "noise_robustness",
    "detection_entry",
    "detection_study",
]
