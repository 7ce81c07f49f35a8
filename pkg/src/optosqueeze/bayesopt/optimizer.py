"""The Bayesian-optimization loop.

A run has three phases: a Latin-hypercube initial design, an exploration
phase driven by expected improvement over the whole box, and an exploitation
phase driven by the lower confidence bound inside a trust region around the
incumbent. The surrogate works in unit-box coordinates; the objective always
sees original coordinates.
"""

import logging
from dataclasses import replace

import numpy as np
from scipy.optimize import minimize

from optosqueeze.bayesopt.acquisition import Acquisition, make_acquisition
from optosqueeze.bayesopt.design import initial_design
from optosqueeze.bayesopt.gp import gp_fit, gp_posterior
from optosqueeze.bayesopt.types import (
    BoConfig,
    BoResult,
    GpSurrogate,
    OptimizationProblem,
    PhaseSchedule,
)
from optosqueeze.exceptions import EvaluationFailed

logger = logging.getLogger(__name__)


def propose_next(
    model: GpSurrogate,
    acquisition: Acquisition,
    bounds: np.ndarray,
    rng: np.random.Generator,
    incumbent: np.ndarray | None = None,
    pool_size: int = 2000,
    n_local: int = 200,
    local_scale: float = 0.05,
) -> np.ndarray:
    """Maximize an acquisition over a candidate pool and polish the winner.

    Args:
        model: Fitted surrogate.
        acquisition: Maps (mean, std) to scores.
        bounds: d x 2 search region in the surrogate's coordinates.
        rng: Generator for the pool and the perturbations.
        incumbent: Point whose Gaussian perturbations join the pool.
        pool_size: Latin-hypercube candidates.
        n_local: Incumbent perturbations.
        local_scale: Perturbation standard deviation.

    Returns:
        The best-scoring point, always inside bounds.
    """
    bounds = np.asarray(bounds, dtype=float)
    lo, hi = bounds[:, 0], bounds[:, 1]

    pool = [initial_design(bounds, pool_size, rng)]
    if incumbent is not None and n_local > 0:
        jitter = rng.normal(scale=local_scale, size=(n_local, bounds.shape[0]))
        pool.append(np.clip(incumbent + jitter, lo, hi))
    candidates = np.vstack(pool)

    scores = acquisition(*gp_posterior(model, candidates))
    best = int(np.argmax(scores))
    x_best, s_best = candidates[best], float(scores[best])

    def negative(x: np.ndarray) -> float:
        return -float(acquisition(*gp_posterior(model, x))[0])

    result = minimize(negative, x_best, method="L-BFGS-B", bounds=list(zip(lo, hi)))
    if result.success and -result.fun > s_best:
        x_best = np.clip(result.x, lo, hi)
    return x_best


def run_bo(
    problem: OptimizationProblem,
    schedule: PhaseSchedule,
    seed: int,
    config: BoConfig | None = None,
) -> BoResult:
    """Minimize a black-box objective with the three-phase schedule.

    Args:
        problem: Bounds and objective.
        schedule: Evaluations per phase.
        seed: Seed for every random choice of the run.
        config: Loop settings.

    Returns:
        The complete history; exactly schedule.total evaluations. Failed
        evaluations are recorded with a penalty value.
    """
    config = config or BoConfig()
    rng = np.random.default_rng(seed)
    d = problem.dims
    lo, hi = problem.bounds[:, 0], problem.bounds[:, 1]
    unit_box = np.column_stack([np.zeros(d), np.ones(d)])

    result = BoResult()
    unit_points: list[np.ndarray] = []

    def evaluate(u: np.ndarray, phase: str) -> None:
        x = lo + u * (hi - lo)
        try:
            value = problem.evaluate(x)
            status = "ok" if np.isfinite(value) else "failed"
        except EvaluationFailed as e:
            logger.warning(f"{problem.name}: evaluation failed in {phase} phase: {e}")
            status = "failed"
        if status == "failed":
            value = result.failure_penalty(config.failure_fallback)
        unit_points.append(u)
        result.record(x, value, status, phase)
        logger.debug(
            f"{problem.name}: #{result.n_evaluations} {phase} value={value:.6g} "
            f"best={result.incumbent_trace[-1]:.6g}"
        )

    logger.info(
        f"{problem.name}: starting run (d={d}, schedule={schedule.n_initial}/"
        f"{schedule.n_explore}/{schedule.n_exploit}, seed={seed})"
    )
    for u in initial_design(unit_box, schedule.n_initial, rng):
        evaluate(u, "initial")

    model: GpSurrogate | None = None
    since_fit = 0
    phases = ["explore"] * schedule.n_explore + ["exploit"] * schedule.n_exploit
    for step, phase in enumerate(phases):
        if step == schedule.n_explore:
            logger.info(f"{problem.name}: exploitation phase, best={result.best_value:.6g}")
        if len(unit_points) < 2:
            evaluate(rng.uniform(size=d), phase)
            continue

        x_train = np.array(unit_points)
        y_train = np.array(result.values)
        refit = model is None or since_fit >= config.refit_every
        gp_config = config.gp
        if not refit:
            gp_config = replace(config.gp, fit_hyperparameters=False)
        model = gp_fit(
            x_train,
            y_train,
            gp_config,
            rng=rng,
            initial=None if model is None else model.log_params,
        )
        since_fit = 0 if refit else since_fit + 1

        best_index = result.best_index
        incumbent = x_train[best_index] if best_index is not None else None
        if phase == "explore":
            y_best = result.best_value if best_index is not None else model.y_best
            acquisition = make_acquisition("ei", y_best)
            region = unit_box
        else:
            acquisition = make_acquisition("lcb", model.y_best, beta=config.beta)
            center = incumbent if incumbent is not None else x_train[np.argmin(y_train)]
            region = np.column_stack(
                [
                    np.clip(center - config.trust_region, 0.0, 1.0),
                    np.clip(center + config.trust_region, 0.0, 1.0),
                ]
            )

        u_next = propose_next(
            model,
            acquisition,
            region,
            rng,
            incumbent=incumbent,
            pool_size=config.pool_size,
            n_local=config.n_local,
            local_scale=config.local_scale,
        )
        evaluate(u_next, phase)

    logger.info(
        f"{problem.name}: finished {result.n_evaluations} evaluations, "
        f"best={result.best_value:.6g}"
    )
    return result
