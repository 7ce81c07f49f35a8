"""Data types for Gaussian-process Bayesian optimization."""

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from optosqueeze import constants


@dataclass(frozen=True)
class GpConfig:
    """Surrogate settings.

    Attributes:
        noise_var: Fixed observation noise variance in output units, or None
            to fit it with the other hyperparameters.
        normalize_y: Standardize outputs (constant mean) before fitting.
        fit_hyperparameters: Maximize the marginal likelihood; when False the
            initial hyperparameters are used as given.
        n_restarts: Number of local ascents in the hyperparameter fit.
        lengthscale: Initial length-scale in unit-box coordinates.
        signal_var: Initial signal variance (standardized units).
        lengthscale_bounds: Bounds on every length-scale.
        signal_var_bounds: Bounds on the signal variance.
        noise_var_bounds: Bounds on the fitted noise variance.
    """

    noise_var: float | None = None
    normalize_y: bool = True
    fit_hyperparameters: bool = True
    n_restarts: int = 3
    lengthscale: float = 0.3
    signal_var: float = 1.0
    lengthscale_bounds: tuple[float, float] = (1e-2, 1e1)
    signal_var_bounds: tuple[float, float] = (1e-2, 1e2)
    noise_var_bounds: tuple[float, float] = (1e-8, 1.0)


@dataclass
class GpSurrogate:
    """A fitted Gaussian-process surrogate with a Matern-5/2 ARD kernel.

    Attributes:
        inputs: M x d training inputs in unit-box coordinates.
        outputs: M training outputs in original units.
        lengthscales: Per-dimension length-scales.
        signal_var: Kernel signal variance (standardized units).
        noise_var: Observation noise variance (standardized units).
        y_mean: Constant prior mean in original units.
        y_scale: Output standardization scale.
        y_best: Smallest training output.
        chol: Lower Cholesky factor of the noisy Gram matrix.
        alpha: Gram-matrix solve against the standardized outputs.
        jitter: Diagonal jitter that made the Gram matrix factorizable.
    """

    inputs: np.ndarray
    outputs: np.ndarray
    lengthscales: np.ndarray
    signal_var: float
    noise_var: float
    y_mean: float
    y_scale: float
    y_best: float
    chol: np.ndarray
    alpha: np.ndarray
    jitter: float = 0.0

    @property
    def log_params(self) -> np.ndarray:
        """Hyperparameters as (log lengthscales, log signal var, log noise var)."""
        return np.concatenate(
            [
                np.log(self.lengthscales),
                [np.log(self.signal_var), np.log(max(self.noise_var, 1e-300))],
            ]
        )


@dataclass(frozen=True)
class PhaseSchedule:
    """Number of evaluations in each optimization phase."""

    n_initial: int
    n_explore: int
    n_exploit: int

    def __post_init__(self) -> None:
        for name in ("n_initial", "n_explore", "n_exploit"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1, got {getattr(self, name)}")

    @property
    def total(self) -> int:
        return self.n_initial + self.n_explore + self.n_exploit

    @classmethod
    def for_layout(cls, kind: str) -> "PhaseSchedule":
        """Default schedule for a layout kind."""
        return cls(*constants.SCHEDULES[kind])


@dataclass
class OptimizationProblem:
    """A bounded black-box minimization problem.

    Attributes:
        bounds: d x 2 array of (lo, hi) pairs.
        objective: Maps a point to a scalar; raises EvaluationFailed when the
            point cannot be evaluated.
        name: Label used in logs.
        direction: Only "minimize" is supported.
        constraint_transform: Optional reparameterization applied to a point
            before the objective sees it.
    """

    bounds: np.ndarray
    objective: Callable[[np.ndarray], float]
    name: str = "problem"
    direction: str = "minimize"
    constraint_transform: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self) -> None:
        self.bounds = np.asarray(self.bounds, dtype=float)
        if self.bounds.ndim != 2 or self.bounds.shape[1] != 2:
            raise ValueError(f"bounds must be d x 2, got shape {self.bounds.shape}")
        if np.any(self.bounds[:, 0] >= self.bounds[:, 1]):
            raise ValueError("Every bound needs lo < hi")
        if self.direction != "minimize":
            raise ValueError(f"Unsupported direction: {self.direction}")

    @property
    def dims(self) -> int:
        return self.bounds.shape[0]

    def evaluate(self, x: np.ndarray) -> float:
        if self.constraint_transform is not None:
            x = self.constraint_transform(x)
        return float(self.objective(x))


@dataclass(frozen=True)
class BoConfig:
    """Loop settings for run_bo.

    Attributes:
        gp: Surrogate settings.
        beta: Confidence weight of the exploitation acquisition.
        trust_region: Half-width of the exploitation box as a fraction of
            each bound range.
        pool_size: Candidate-pool size per proposal.
        n_local: Incumbent perturbations added to the pool.
        local_scale: Standard deviation of the perturbations (unit box).
        refit_every: Hyperparameters are refitted every this many proposals.
        failure_fallback: Value assigned to a failure before any success.
    """

    gp: GpConfig = field(default_factory=GpConfig)
    beta: float = constants.LCB_BETA
    trust_region: float = constants.TRUST_REGION_FRACTION
    pool_size: int = constants.CANDIDATE_POOL_SIZE
    n_local: int = 200
    local_scale: float = 0.05
    refit_every: int = 5
    failure_fallback: float = 1.0


@dataclass
class BoResult:
    """Full evaluation history of one optimization run.

    Attributes:
        points: Evaluated points in original coordinates, in order.
        values: Objective values; failures carry their penalty value.
        statuses: "ok" or "failed" per evaluation.
        phases: Phase label per evaluation.
        incumbent_trace: Best successful value after each evaluation.
    """

    points: list[np.ndarray] = field(default_factory=list)
    values: list[float] = field(default_factory=list)
    statuses: list[str] = field(default_factory=list)
    phases: list[str] = field(default_factory=list)
    incumbent_trace: list[float] = field(default_factory=list)

    @property
    def n_evaluations(self) -> int:
        return len(self.values)

    @property
    def best_index(self) -> int | None:
        """Index of the best successful evaluation, None if all failed."""
        ok = [i for i, s in enumerate(self.statuses) if s == "ok"]
        if not ok:
            return None
        return min(ok, key=lambda i: self.values[i])

    @property
    def best_point(self) -> np.ndarray | None:
        index = self.best_index
        return None if index is None else self.points[index]

    @property
    def best_value(self) -> float:
        index = self.best_index
        return float("inf") if index is None else self.values[index]

    def failure_penalty(self, fallback: float) -> float:
        """Worst successful value plus three standard deviations.

        Returns fallback while nothing has succeeded.
        """
        ok = np.array([v for v, s in zip(self.values, self.statuses) if s == "ok"])
        if ok.size == 0:
            return fallback
        return float(np.max(ok) + 3.0 * np.std(ok))

    def record(self, point: np.ndarray, value: float, status: str, phase: str) -> None:
        """Append one evaluation and extend the incumbent trace."""
        self.points.append(np.array(point, dtype=float))
        self.values.append(float(value))
        self.statuses.append(status)
        self.phases.append(phase)
        previous = self.incumbent_trace[-1] if self.incumbent_trace else float("inf")
        current = value if status == "ok" else float("inf")
        self.incumbent_trace.append(min(previous, current))
