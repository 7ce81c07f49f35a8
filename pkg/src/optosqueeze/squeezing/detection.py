"""Search over homodyne angles for the minimal generalized variance.

The mixing angle phi is eliminated in closed form, which leaves a 2-d
landscape over (theta_c, theta_m) with period pi on each axis. For a cooled
oscillator the minimum is broad and any local search finds lambda_min; for a
thermal oscillator it sits in a narrow trough and searches may stop short,
which is reported through the trapped flag.
"""

import logging
import math

import numpy as np
from scipy.optimize import minimize

from optosqueeze.bayesopt import BoConfig, OptimizationProblem, PhaseSchedule, run_bo
from optosqueeze.dynamics import BipartiteCovariance
from optosqueeze.squeezing.metrics import (
    min_eigenvalue,
    optimal_phi,
    rotated_components,
)
from optosqueeze.squeezing.types import (
    AngleLandscape,
    DetectionAngles,
    DetectionResult,
    DetectionStrategy,
)

logger = logging.getLogger(__name__)

ANGLE_BOX = np.array([[0.0, math.pi], [0.0, math.pi]])


class _CountingObjective:
    """Phi-eliminated variance that counts its evaluations."""

    def __init__(self, v: BipartiteCovariance):
        self.v = v
        self.calls = 0

    def __call__(self, theta: np.ndarray) -> float:
        self.calls += 1
        return optimal_phi(self.v, float(theta[0]), float(theta[1]))[1]


def _refine(objective: _CountingObjective, starts: list[np.ndarray]) -> np.ndarray:
    """Nelder-Mead from each start; returns the best end point."""
    best_x, best_f = starts[0], math.inf
    for start in starts:
        result = minimize(
            objective,
            start,
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-14, "maxfev": 400},
        )
        if result.fun < best_f:
            best_x, best_f = result.x, result.fun
    return best_x


def detect_min_variance(
    v: BipartiteCovariance, strategy: DetectionStrategy | None = None
) -> DetectionResult:
    """Find detection angles minimizing the generalized-quadrature variance.

    Args:
        v: Bipartite covariance.
        strategy: Search method and budget.

    Returns:
        Best angles, their variance, the minimal eigenvalue for comparison
        and whether the search was trapped above it. Ties between equal
        variances go to the lexicographically smallest angles.
    """
    strategy = strategy or DetectionStrategy()
    objective = _CountingObjective(v)

    if strategy.method == "grid":
        grid = np.arange(strategy.grid_n) * math.pi / strategy.grid_n
        tc, tm = np.meshgrid(grid, grid, indexing="ij")
        values = np.array(
            [objective(np.array([a, b])) for a, b in zip(tc.ravel(), tm.ravel())]
        )
        order = np.lexsort((tm.ravel(), tc.ravel(), values))[: strategy.refine_starts]
        starts = [np.array([tc.ravel()[i], tm.ravel()[i]]) for i in order]
        best = _refine(objective, starts)
    elif strategy.method == "lbfgsb":
        rng = np.random.default_rng(strategy.seed)
        best, best_f = None, math.inf
        for _ in range(strategy.refine_starts):
            result = minimize(
                objective,
                rng.uniform(0.0, math.pi, size=2),
                method="L-BFGS-B",
                bounds=[(0.0, math.pi)] * 2,
            )
            if result.fun < best_f:
                best, best_f = result.x, result.fun
    else:
        problem = OptimizationProblem(
            bounds=ANGLE_BOX, objective=objective, name="detection"
        )
        history = run_bo(
            problem,
            PhaseSchedule(40, 40, 20),
            strategy.seed,
            BoConfig(pool_size=500, n_local=50),
        )
        best = _refine(objective, [history.best_point])

    phi, variance = optimal_phi(v, float(best[0]), float(best[1]))
    angles = DetectionAngles.wrapped(best[0], best[1], phi)
    lambda_min = min_eigenvalue(v)
    tolerance = strategy.trapped_tolerance * max(1.0, abs(lambda_min))
    trapped = variance - lambda_min > tolerance
    if trapped:
        logger.warning(
            f"Detection search trapped: variance {variance:.6g} vs lambda_min {lambda_min:.6g}"
        )
    return DetectionResult(
        angles=angles,
        variance=variance,
        lambda_min=lambda_min,
        n_evaluations=objective.calls,
        trapped=bool(trapped),
    )


def angle_landscape(
    v: BipartiteCovariance,
    grid_n: int,
    theta_range: tuple[float, float] = (0.0, math.pi),
) -> AngleLandscape:
    """Phi-eliminated variance on a square grid of angles.

    Args:
        v: Bipartite covariance.
        grid_n: Points per axis, at least 2; the upper end is excluded.
        theta_range: Angle interval shared by both axes.

    Returns:
        grid_n x grid_n landscape, rows over theta_c.
    """
    if grid_n < 2:
        raise ValueError(f"grid_n must be at least 2, got {grid_n}")
    axis = np.linspace(theta_range[0], theta_range[1], grid_n, endpoint=False)
    tc, tm = np.meshgrid(axis, axis, indexing="ij")
    a, b, c = rotated_components(v.v, tc, tm)
    values = 0.5 * (a + b) - np.hypot(0.5 * (a - b), c)
    return AngleLandscape(theta_c=axis, theta_m=axis.copy(), values=values)
