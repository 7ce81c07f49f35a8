"""Optimization experiments over pulse layouts.

Each experiment is a pure function of its inputs and seeds. Independent
runs (repeats, sweep points) go through a process pool when more than one
worker is configured; every run is still seeded individually, so results do
not depend on the worker count.
"""

import logging
import math
import time
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Any

import numpy as np

from optosqueeze import constants
from optosqueeze.bayesopt import (
    BoResult,
    OptimizationProblem,
    PhaseSchedule,
    run_bo,
    run_lbfgsb,
)
from optosqueeze.dynamics import (
    BipartiteCovariance,
    SolverOptions,
    SystemParams,
    optimal_fout_constant,
)
from optosqueeze.exceptions import ConfigError, EvaluationFailed
from optosqueeze.harness.layouts import VariableLayout
from optosqueeze.harness.objective import (
    EvaluationLog,
    PulseObjective,
    decode_and_evaluate,
    simulate_pulse,
)
from optosqueeze.harness.types import (
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
from optosqueeze.pulses import PulseConfig, duration_from_gain
from optosqueeze.squeezing import (
    DetectionStrategy,
    angle_landscape,
    detect_min_variance,
    generalized_squeezing,
    min_eigenvalue,
    signed_squeezing,
)

logger = logging.getLogger(__name__)

HISTOGRAM_BINS = 10

# Second entropy word of the control-noise stream, keeps it apart from the
# optimizer stream of the same seed
NOISE_STREAM = 1


# --- Parallel execution ---


def _call(task: tuple[Callable[..., Any], dict[str, Any]]) -> Any:
    func, kwargs = task
    return func(**kwargs)


def _run_tasks(
    func: Callable[..., Any], tasks: list[dict[str, Any]], workers: int
) -> list[Any]:
    """Run func on every kwargs dict, in order, on up to `workers` processes."""
    if workers <= 1 or len(tasks) <= 1:
        return [func(**kwargs) for kwargs in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as executor:
        return list(executor.map(_call, [(func, kwargs) for kwargs in tasks]))


# --- Single runs ---


def _build_record(
    layout: VariableLayout,
    history: BoResult,
    log: list[EvaluationLog],
    seed: int,
    schedule: tuple[int, int, int],
    run: RunOptions,
    noise_sigma: float,
) -> RunRecord:
    evaluations = [
        EvaluationEntry(
            index=i,
            phase=history.phases[i],
            vector=[float(x) for x in history.points[i]],
            lambda_min=entry.lambda_min if history.statuses[i] == "ok" else None,
            s_gen=entry.s_gen if history.statuses[i] == "ok" else None,
            status=history.statuses[i],
            error=entry.error,
        )
        for i, entry in enumerate(log)
    ]
    record = RunRecord(
        seed=seed,
        layout=layout.kind,
        schedule=schedule,
        params=layout.params.to_dict(),
        evaluations=evaluations,
        incumbent_trace=list(history.incumbent_trace),
        optimizer=run.optimizer,
        solver=run.solver,
        noise_sigma=noise_sigma,
    )

    index = history.best_index
    if index is None:
        logger.warning(f"{layout.kind} seed {seed}: every evaluation failed")
        return record

    best = evaluations[index]
    record.best_vector = best.vector
    record.best_lambda_min = float(best.lambda_min)
    record.best_s_gen = float(best.s_gen)
    decoded = layout.decode(best.vector)
    if isinstance(decoded, PulseConfig):
        record.best_tau = decoded.tau
        record.best_knots = layout.profile_knots(decoded)
    else:
        record.best_knots = {"theta": [decoded.theta_c, decoded.theta_m, decoded.phi]}
    return record


def optimize_once(
    layout: VariableLayout,
    params: SystemParams | None = None,
    schedule: PhaseSchedule | None = None,
    seed: int = 0,
    run: RunOptions | None = None,
    noise_sigma: float = 0.0,
) -> RunRecord:
    """Optimize one layout with one seed.

    Args:
        layout: Variable layout.
        params: System parameters; replaces the layout's when given.
        schedule: Phase schedule; defaults to the layout's standard schedule.
            The gradient optimizer spends schedule.total evaluations.
        seed: Seed of the optimizer (and of the control noise stream).
        run: Solver and optimizer choice.
        noise_sigma: Relative control noise applied to every evaluation.

    Returns:
        The run record, best value chosen among the (possibly noisy)
        evaluations.

    Raises:
        ConfigError: If the optimizer or solver is unknown.
    """
    run = run or RunOptions()
    if params is not None:
        layout = replace(layout, params=params)
    schedule = schedule or PhaseSchedule.for_layout(layout.kind)

    noise_rng = np.random.default_rng([seed, NOISE_STREAM]) if noise_sigma > 0 else None
    objective = PulseObjective(
        layout,
        solver=run.solver,
        options=run.solver_options,
        noise_sigma=noise_sigma,
        noise_rng=noise_rng,
        truncation=run.truncation,
    )
    problem = OptimizationProblem(
        bounds=layout.bounds, objective=objective, name=f"{layout.kind}/seed={seed}"
    )

    start = time.perf_counter()
    if run.optimizer == "bayesopt":
        history = run_bo(problem, schedule, seed, run.bo_config)
        shape = (schedule.n_initial, schedule.n_explore, schedule.n_exploit)
    elif run.optimizer == "lbfgsb":
        fallback = run.bo_config.failure_fallback
        history = run_lbfgsb(problem, schedule.total, seed, fallback)
        shape = (schedule.total, 0, 0)
    else:
        raise ConfigError(f"Unknown optimizer: {run.optimizer}")
    elapsed = time.perf_counter() - start

    record = _build_record(
        layout, history, objective.log, seed, shape, run, noise_sigma
    )
    if run.record_timing:
        record.wall_time = elapsed
    logger.info(
        f"{problem.name}: best S_gen {record.best_s_gen:.4f} dB after "
        f"{len(record.evaluations)} evaluations ({record.n_failed} failed)"
    )
    return record


def noisy_optimize(
    layout: VariableLayout,
    params: SystemParams | None = None,
    schedule: PhaseSchedule | None = None,
    rel_sigma: float = constants.CONTROL_NOISE_SIGMA,
    seed: int = 0,
    run: RunOptions | None = None,
) -> RunRecord:
    """Optimize under control noise and re-evaluate the incumbent without it.

    Every evaluation perturbs the coupling before simulating. The reported
    squeezing (final_noiseless_s_gen) re-evaluates the incumbent vector
    noiselessly.
    """
    run = run or RunOptions()
    if params is not None:
        layout = replace(layout, params=params)
    record = optimize_once(layout, None, schedule, seed, run, noise_sigma=rel_sigma)
    if record.best_vector is None:
        return record
    try:
        _, s_gen = decode_and_evaluate(
            layout, record.best_vector, solver=run.solver, options=run.solver_options
        )
        record.final_noiseless_s_gen = s_gen
    except EvaluationFailed as e:
        logger.warning(f"Noiseless re-evaluation failed for seed {seed}: {e}")
    return record


# --- Repeats ---


def _average_pulse(records: list[RunRecord]) -> list[AveragePulseRow]:
    """Per-knot mean and standard error of the incumbents' profiles."""
    rows: list[AveragePulseRow] = []
    if not records:
        return rows

    def add(profile: str, samples: np.ndarray) -> None:
        n = samples.shape[0]
        mean = samples.mean(axis=0)
        if n > 1:
            stderr = samples.std(axis=0, ddof=1) / math.sqrt(n)
        else:
            stderr = np.zeros_like(mean)
        rows.extend(
            AveragePulseRow(profile=profile, knot=k, mean=float(m), stderr=float(s))
            for k, (m, s) in enumerate(zip(mean, stderr))
        )

    for profile in records[0].best_knots:
        samples = [r.best_knots[profile] for r in records if profile in r.best_knots]
        if len({len(s) for s in samples}) == 1:
            add(profile, np.array(samples))
    taus = [r.best_tau for r in records if r.best_tau is not None]
    if taus:
        add("tau", np.array(taus)[:, None])
    return rows


def summarize_records(records: list[RunRecord]) -> RepeatSummary:
    """Distribution statistics of the best squeezing over runs."""
    ok = [r for r in records if r.succeeded]
    values = [r.reported_s_gen for r in ok]
    if values:
        counts, edges = np.histogram(values, bins=HISTOGRAM_BINS)
        stats = (min(values), float(np.mean(values)), max(values))
    else:
        counts, edges = np.zeros(0, dtype=int), np.zeros(0)
        stats = (math.nan, math.nan, math.nan)
    return RepeatSummary(
        records=records,
        best_s_gen=values,
        minimum=stats[0],
        mean=stats[1],
        maximum=stats[2],
        histogram_counts=[int(c) for c in counts],
        histogram_edges=[float(e) for e in edges],
        average_pulse=_average_pulse(ok),
        n_failed=len(records) - len(ok),
    )


def repeat_optimize(
    layout: VariableLayout,
    params: SystemParams | None = None,
    schedule: PhaseSchedule | None = None,
    n_repeats: int = 1,
    base_seed: int = 0,
    run: RunOptions | None = None,
    noise_sigma: float = 0.0,
) -> RepeatSummary:
    """Independent seeded runs (seeds base_seed, base_seed + 1, ...).

    With noise_sigma > 0 every run is a noisy optimization and the summary
    uses the noiseless re-evaluations.

    Raises:
        ValueError: If n_repeats < 1.
    """
    if n_repeats < 1:
        raise ValueError(f"n_repeats must be at least 1, got {n_repeats}")
    run = run or RunOptions()
    if params is not None:
        layout = replace(layout, params=params)

    logger.info(f"Running {n_repeats} repeats of {layout.kind} from seed {base_seed}")
    if noise_sigma > 0:
        func, extra = noisy_optimize, {"rel_sigma": noise_sigma}
    else:
        func, extra = optimize_once, {}
    tasks = [
        {
            "layout": layout,
            "schedule": schedule,
            "seed": base_seed + i,
            "run": run,
            **extra,
        }
        for i in range(n_repeats)
    ]
    records = _run_tasks(func, tasks, run.workers)
    summary = summarize_records(records)
    logger.info(
        f"{layout.kind}: best S_gen min/mean/max "
        f"{summary.minimum:.4f}/{summary.mean:.4f}/{summary.maximum:.4f} dB"
    )
    return summary


# --- Heating-rate studies ---


def stable_initial_occupation(
    gamma_heat: float, kappa: float = constants.KAPPA
) -> float:
    """Initial occupation used where n_0 = n_th is numerically fragile."""
    if gamma_heat >= kappa:
        return constants.HOT_BATH_OCCUPATION
    return constants.COOLED_OCCUPATION


def params_at_heating_rate(
    params: SystemParams, gamma_heat: float, n_0: float | None = None
) -> SystemParams:
    """Copy of params at a heating rate, with n_0 given or the stable default.

    Raises:
        ConfigError: If the heating rate is negative or gamma is zero.
    """
    if gamma_heat < 0:
        raise ConfigError(f"Heating rate must be non-negative, got {gamma_heat}")
    try:
        heated = params.with_heating_rate(gamma_heat)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    if n_0 is None:
        n_0 = stable_initial_occupation(gamma_heat, params.kappa)
    return heated.with_initial_occupation(n_0)


def _signed_best(record: RunRecord) -> float:
    return signed_squeezing(record.best_lambda_min)


def thermal_sweep(
    layout: VariableLayout,
    gamma_values: list[float],
    params: SystemParams | None = None,
    schedule: PhaseSchedule | None = None,
    repeats: int = 1,
    base_seed: int = 0,
    n_0: float | None = None,
    run: RunOptions | None = None,
) -> list[SweepPoint]:
    """Best and mean optimized squeezing as a function of the heating rate.

    Point k uses seeds base_seed + k * repeats + i, so no two runs of the
    sweep share a seed.

    Args:
        layout: Pulse layout (not detection_angles).
        gamma_values: Heating rates Gamma = gamma * n_th, in units of kappa.
        params: Base system parameters; n_th is set from each Gamma.
        schedule: Phase schedule per run.
        repeats: Runs per heating rate.
        base_seed: First seed.
        n_0: Initial occupation; None picks the stable default per Gamma.
        run: Solver and optimizer choice.

    Returns:
        One point per heating rate with signed squeezing values.

    Raises:
        ConfigError: If the list is empty or the layout has no pulse.
    """
    if not gamma_values:
        raise ConfigError("thermal_sweep needs at least one heating rate")
    if layout.kind == "detection_angles":
        raise ConfigError("thermal_sweep needs a pulse layout")
    run = run or RunOptions()
    base = params or layout.params

    point_params = [params_at_heating_rate(base, g, n_0) for g in gamma_values]
    tasks = [
        {
            "layout": replace(layout, params=p),
            "schedule": schedule,
            "seed": base_seed + k * repeats + i,
            "run": run,
        }
        for k, p in enumerate(point_params)
        for i in range(repeats)
    ]
    records = _run_tasks(optimize_once, tasks, run.workers)

    points = []
    for k, (gamma_heat, p) in enumerate(zip(gamma_values, point_params)):
        chunk = records[k * repeats : (k + 1) * repeats]
        signed = [_signed_best(r) for r in chunk if r.succeeded]
        point = SweepPoint(
            gamma_heat=gamma_heat,
            n_th=p.n_th,
            n_0=p.n_0,
            best_db=max(signed) if signed else math.nan,
            mean_db=float(np.mean(signed)) if signed else math.nan,
            n_failed=len(chunk) - len(signed),
            records=chunk,
        )
        logger.info(
            f"Gamma={gamma_heat:.4g}: "
            f"best {point.best_db:.4f} dB, mean {point.mean_db:.4f} dB"
        )
        points.append(point)
    return points


def fixed_pulse_sweep(
    params: SystemParams,
    pulses: list[tuple[float, float]],
    gamma_values: list[float],
    n_0: float | None = None,
    solver: str = "numeric",
    options: SolverOptions | None = None,
) -> list[FixedPulsePoint]:
    """Signed squeezing of fixed constant pulses across heating rates.

    Each (g, tau) pulse uses the output weighting matched at that heating
    rate. Failed points carry NaN.
    """
    options = options or SolverOptions()
    points = []
    for gamma_heat in gamma_values:
        p = params_at_heating_rate(params, gamma_heat, n_0)
        for g, tau in pulses:
            fout = optimal_fout_constant(p, g, tau, options.fout_grid_points)
            pulse = replace(
                PulseConfig.constant(g, tau, fout=fout), fout_is_normalized=True
            )
            try:
                v = simulate_pulse(p, pulse, solver, options)
                value = signed_squeezing(min_eigenvalue(v))
            except (ArithmeticError, ValueError) as e:
                logger.warning(
                    f"Fixed pulse g={g}, tau={tau} at Gamma={gamma_heat} failed: {e}"
                )
                value = math.nan
            points.append(
                FixedPulsePoint(g=g, tau=tau, gamma_heat=gamma_heat, s_gen_db=value)
            )
    return points


def coupling_scan(
    params: SystemParams,
    g_values: list[float],
    options: SolverOptions | None = None,
    gain_limit: float = constants.GAIN_LIMIT,
    duration_bounds: tuple[float, float] = constants.DURATION_BOUNDS,
) -> list[CouplingScanPoint]:
    """Squeezing at the gain limit (p = 1) for each coupling, with both solvers.

    Without the rotating-wave approximation the squeezing against g has
    several local maxima; the analytic solver shows a single smooth curve.
    """
    options = options or SolverOptions()
    points = []
    for g in g_values:
        tau = duration_from_gain(
            g, 1.0, gain_limit, duration_bounds[1], duration_bounds[0], params.kappa
        )
        fout = optimal_fout_constant(params, g, tau, options.fout_grid_points)
        pulse = replace(
            PulseConfig.constant(g, tau, fout=fout, gain_limit=gain_limit),
            fout_is_normalized=True,
        )
        values = {}
        for solver in ("numeric", "rwa"):
            try:
                v = simulate_pulse(params, pulse, solver, options)
                values[solver] = generalized_squeezing(min_eigenvalue(v))
            except (ArithmeticError, ValueError) as e:
                logger.warning(f"Coupling scan g={g} ({solver}) failed: {e}")
                values[solver] = math.nan
        points.append(
            CouplingScanPoint(
                g=g, tau=tau, numeric_db=values["numeric"], rwa_db=values["rwa"]
            )
        )
    return points


# --- Control-noise robustness ---


def noise_robustness(
    layout: VariableLayout,
    vector: list[float] | np.ndarray,
    params: SystemParams | None = None,
    rel_sigma: float = constants.CONTROL_NOISE_SIGMA,
    n_samples: int = constants.NOISE_RESAMPLES,
    seed: int = 0,
    run: RunOptions | None = None,
) -> NoiseStudy:
    """Re-evaluate one vector many times under fresh control noise.

    Raises:
        EvaluationFailed: If the noiseless evaluation itself fails.
    """
    run = run or RunOptions()
    if params is not None:
        layout = replace(layout, params=params)
    _, noiseless = decode_and_evaluate(
        layout, vector, solver=run.solver, options=run.solver_options
    )

    objective = PulseObjective(
        layout,
        solver=run.solver,
        options=run.solver_options,
        noise_sigma=rel_sigma,
        noise_rng=np.random.default_rng(seed),
        truncation=run.truncation,
    )
    samples = []
    n_failed = 0
    for _ in range(n_samples):
        try:
            samples.append(objective.evaluate(np.asarray(vector, dtype=float))[1])
        except EvaluationFailed:
            n_failed += 1
    study = NoiseStudy(
        vector=[float(x) for x in vector],
        noiseless_s_gen=noiseless,
        samples=np.array(samples),
        n_failed=n_failed,
    )
    logger.info(
        f"Noise robustness: noiseless {noiseless:.4f} dB, noisy mean {study.mean:.4f} dB "
        f"over {len(samples)} samples"
    )
    return study


# --- Detection ---


def detection_entry(
    label: str,
    n_0: float,
    v: BipartiteCovariance,
    strategy: DetectionStrategy | None = None,
    landscape_grid: int | None = None,
) -> DetectionEntry:
    """Detection search on one covariance, with an optional landscape."""
    result = detect_min_variance(v, strategy)
    landscape = angle_landscape(v, landscape_grid) if landscape_grid else None
    logger.info(
        f"Detection ({label}): variance {result.variance:.6g}, lambda_min "
        f"{result.lambda_min:.6g}, trapped={result.trapped}"
    )
    return DetectionEntry(label=label, n_0=n_0, result=result, landscape=landscape)


def detection_study(
    params: SystemParams,
    pulse: PulseConfig,
    cooled_n0: float = constants.COOLED_OCCUPATION,
    strategy: DetectionStrategy | None = None,
    solver: str = "numeric",
    options: SolverOptions | None = None,
    landscape_grid: int | None = None,
) -> DetectionReport:
    """Detection-angle search after the pulse, from a thermal and a cooled start.

    Args:
        params: System parameters.
        pulse: The pulse.
        cooled_n0: Initial occupation of the cooled run.
        strategy: Angle search settings.
        solver: "numeric" or "rwa".
        options: Solver settings.
        landscape_grid: Grid size of the exported landscapes, None to skip.

    Returns:
        Entries for n_0 = n_th and n_0 = cooled_n0.
    """
    entries = []
    for label, n_0 in (("thermal", params.n_th), ("cooled", cooled_n0)):
        v = simulate_pulse(params.with_initial_occupation(n_0), pulse, solver, options)
        entries.append(detection_entry(label, n_0, v, strategy, landscape_grid))
    return DetectionReport(thermal=entries[0], cooled=entries[1])
