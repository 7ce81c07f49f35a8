"""Data types for the experiment harness.

These dataclasses carry the results of optimization runs and studies
between the harness, the persistence layer and the command line.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from optosqueeze import constants
from optosqueeze.bayesopt import BoConfig
from optosqueeze.dynamics import SolverOptions
from optosqueeze.squeezing import AngleLandscape, DetectionResult

# Layout kinds, in the order of their dimensionality
LAYOUT_KINDS = (
    "const_coupling",
    "const_coupling_detuning",
    "fout_only",
    "pwl_coupling_fout",
    "pwl_all",
    "detection_angles",
)


@dataclass(frozen=True)
class RunOptions:
    """How runs are executed, independent of what they optimize.

    Attributes:
        solver: "numeric" (no rotating-wave approximation) or "rwa".
        optimizer: "bayesopt" or "lbfgsb".
        solver_options: Integrator tolerances and output-mode grid.
        bo_config: Bayesian-optimization loop settings.
        truncation: Control-noise truncation in standard deviations.
        record_timing: Store wall times in run records.
        workers: Processes for independent repeats and sweep points.
    """

    solver: str = "numeric"
    optimizer: str = "bayesopt"
    solver_options: SolverOptions = field(default_factory=SolverOptions)
    bo_config: BoConfig = field(default_factory=BoConfig)
    truncation: float = constants.NOISE_TRUNCATION
    record_timing: bool = False
    workers: int = 1


@dataclass
class EvaluationEntry:
    """One objective evaluation of an optimization run.

    Attributes:
        index: Position in the run, starting at 0.
        phase: "initial", "explore", "exploit" or "lbfgsb".
        vector: Evaluated point in original coordinates.
        lambda_min: Minimal eigenvalue, None if the evaluation failed.
        s_gen: Generalized squeezing in dB, None if the evaluation failed.
        status: "ok" or "failed".
        error: Failure message, if any.
    """

    index: int
    phase: str
    vector: list[float]
    lambda_min: float | None
    s_gen: float | None
    status: str = "ok"
    error: str | None = None


@dataclass
class RunRecord:
    """Complete, reproducible history of one optimization run.

    Attributes:
        seed: Seed of the run; re-running it reproduces the history.
        layout: Layout kind.
        schedule: (n_initial, n_explore, n_exploit), or (budget, 0, 0) for
            the gradient optimizer.
        params: System parameter snapshot.
        evaluations: Every objective evaluation in order.
        incumbent_trace: Best minimal eigenvalue after each evaluation.
        optimizer: "bayesopt" or "lbfgsb".
        solver: "numeric" or "rwa".
        noise_sigma: Relative control noise applied during the run.
        best_vector: Incumbent vector, None if every evaluation failed.
        best_lambda_min: Incumbent minimal eigenvalue (inf if none).
        best_s_gen: Incumbent generalized squeezing in dB.
        best_tau: Duration of the incumbent pulse.
        best_knots: Optimized profiles of the incumbent, keyed by profile.
        final_noiseless_s_gen: Noiseless re-evaluation of the incumbent.
        wall_time: Run time in seconds, when timing is recorded.
    """

    seed: int
    layout: str
    schedule: tuple[int, int, int]
    params: dict[str, float]
    evaluations: list[EvaluationEntry] = field(default_factory=list)
    incumbent_trace: list[float] = field(default_factory=list)
    optimizer: str = "bayesopt"
    solver: str = "numeric"
    noise_sigma: float = 0.0
    best_vector: list[float] | None = None
    best_lambda_min: float = math.inf
    best_s_gen: float = 0.0
    best_tau: float | None = None
    best_knots: dict[str, list[float]] = field(default_factory=dict)
    final_noiseless_s_gen: float | None = None
    wall_time: float | None = None

    @property
    def n_failed(self) -> int:
        return sum(1 for e in self.evaluations if e.status != "ok")

    @property
    def succeeded(self) -> bool:
        return self.best_vector is not None

    @property
    def reported_s_gen(self) -> float:
        """Noiseless squeezing when available, else the incumbent's."""
        if self.final_noiseless_s_gen is not None:
            return self.final_noiseless_s_gen
        return self.best_s_gen


@dataclass
class AveragePulseRow:
    """Mean and standard error of one knot across repeated runs."""

    profile: str
    knot: int
    mean: float
    stderr: float


@dataclass
class RepeatSummary:
    """Distribution of the best squeezing over repeated runs.

    Attributes:
        records: One record per repeat, in seed order.
        best_s_gen: Reported squeezing of every successful run.
        minimum: Smallest best squeezing.
        mean: Mean best squeezing.
        maximum: Largest best squeezing.
        histogram_counts: Counts per histogram bin.
        histogram_edges: Bin edges, one more than the counts.
        average_pulse: Per-knot mean and standard error of the incumbents.
        n_failed: Runs without a single successful evaluation.
    """

    records: list[RunRecord]
    best_s_gen: list[float]
    minimum: float
    mean: float
    maximum: float
    histogram_counts: list[int]
    histogram_edges: list[float]
    average_pulse: list[AveragePulseRow] = field(default_factory=list)
    n_failed: int = 0

    @property
    def spread(self) -> float:
        return self.maximum - self.minimum

    def to_dict(self) -> dict:
        return {
            "n_runs": len(self.records),
            "n_failed": self.n_failed,
            "seeds": [r.seed for r in self.records],
            "best_s_gen": self.best_s_gen,
            "min_s_gen": self.minimum,
            "mean_s_gen": self.mean,
            "max_s_gen": self.maximum,
        }


@dataclass
class SweepPoint:
    """Optimized squeezing at one heating rate.

    Squeezing values are signed (-10 log10 lambda_min), so heating rates
    without squeezing show up as negative dB.
    """

    gamma_heat: float
    n_th: float
    n_0: float
    best_db: float
    mean_db: float
    n_failed: int = 0
    records: list[RunRecord] = field(default_factory=list, repr=False)


@dataclass
class NoiseStudy:
    """Squeezing of one pulse re-evaluated under fresh control noise.

    Attributes:
        vector: The re-evaluated optimization vector.
        noiseless_s_gen: Squeezing without noise, in dB.
        samples: Squeezing of every successful noisy evaluation, in dB.
        n_failed: Noisy evaluations that failed.
    """

    vector: list[float]
    noiseless_s_gen: float
    samples: np.ndarray
    n_failed: int = 0

    @property
    def mean(self) -> float:
        return float(np.mean(self.samples)) if self.samples.size else math.nan


@dataclass
class DetectionEntry:
    """Detection-angle search on one covariance."""

    label: str
    n_0: float
    result: DetectionResult
    landscape: AngleLandscape | None = None


@dataclass
class DetectionReport:
    """Detection study at the thermal and the cooled initial occupation."""

    thermal: DetectionEntry
    cooled: DetectionEntry

    @property
    def entries(self) -> list[DetectionEntry]:
        return [self.thermal, self.cooled]


@dataclass
class CouplingScanPoint:
    """Squeezing at the gain limit for one constant coupling, both solvers."""

    g: float
    tau: float
    numeric_db: float
    rwa_db: float

    @property
    def difference_db(self) -> float:
        return self.numeric_db - self.rwa_db


@dataclass
class FixedPulsePoint:
    """Signed squeezing of a fixed (g, tau) pulse at one heating rate."""

    g: float
    tau: float
    gamma_heat: float
    s_gen_db: float
