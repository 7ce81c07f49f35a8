"""Command implementations behind the optosqueeze command line.

Every command takes a validated ExperimentConfig and the process settings,
writes its outputs under the output directory and returns the written
paths. Run records go to `<out>/<runs_dir>/`, tables and documents to
`<out>/` directly.
"""

import logging
from collections import defaultdict
from pathlib import Path
from typing import Any

import numpy as np

from optosqueeze.config import OptoSqueezeSettings
from optosqueeze.dynamics import SystemParams, is_physical, symplectic_eigenvalues
from optosqueeze.exceptions import ConfigError
from optosqueeze.harness import (
    DetectionEntry,
    RepeatSummary,
    RunOptions,
    VariableLayout,
    coupling_scan,
    detection_study,
    fixed_pulse_sweep,
    make_layout,
    noise_robustness,
    repeat_optimize,
    simulate_pulse,
    thermal_sweep,
)
from optosqueeze.models import ExperimentConfig
from optosqueeze.pulses import PulseConfig, effective_gain
from optosqueeze.records import (
    RunStore,
    run_name,
    write_average_pulse_csv,
    write_fixed_pulse_csv,
    write_histogram_csv,
    write_json,
    write_landscape_csv,
    write_report_csv,
    write_samples_csv,
    write_scan_csv,
    write_sidecar,
    write_sweep_csv,
)
from optosqueeze.squeezing import (
    angle_landscape,
    generalized_squeezing,
    min_eigenvalue,
    signed_squeezing,
)

logger = logging.getLogger(__name__)


# --- Shared setup ---


def _config_dict(config: ExperimentConfig) -> dict[str, Any]:
    return config.model_dump(mode="json")


def run_options(config: ExperimentConfig, settings: OptoSqueezeSettings) -> RunOptions:
    """Execution settings from the experiment and the process settings."""
    return RunOptions(
        solver=config.solver,
        optimizer=config.optimizer,
        solver_options=config.solver_options(
            rtol=settings.rtol,
            atol=settings.atol,
            atol_scale=settings.atol_scale,
            overflow_guard=settings.overflow_guard,
            fout_grid_points=settings.fout_grid_points,
        ),
        bo_config=config.bayesopt.to_bo_config(),
        truncation=config.noise.truncation,
        record_timing=settings.record_timing,
        workers=settings.workers,
    )


def build_pulse(
    config: ExperimentConfig, params: SystemParams, settings: OptoSqueezeSettings
) -> PulseConfig:
    return config.pulse.to_pulse(
        params,
        gain_limit=config.gain_limit,
        duration_bounds=config.bounds.duration,
        fout_grid_points=settings.fout_grid_points,
    )


def build_layout(
    config: ExperimentConfig,
    params: SystemParams,
    settings: OptoSqueezeSettings,
    store: RunStore,
) -> VariableLayout:
    """Layout of the experiment, filling in inputs some kinds depend on.

    fout_only without fixed_g/fixed_tau takes them from the best stored
    const_coupling run; detection_angles optimizes the angles of the
    configured pulse's final state.

    Raises:
        ConfigError: If fout_only has no fixed values and no stored run.
    """
    fixed_g, fixed_tau = config.fixed_g, config.fixed_tau
    if config.layout == "fout_only" and (fixed_g is None or fixed_tau is None):
        best = store.best_record("const_coupling")
        if best is None or best.best_tau is None:
            raise ConfigError(
                "fout_only needs fixed_g and fixed_tau, or a stored const_coupling run"
            )
        fixed_g = best.best_knots["coupling"][0] if fixed_g is None else fixed_g
        fixed_tau = best.best_tau if fixed_tau is None else fixed_tau
        logger.info(f"fout_only uses stored optimum g={fixed_g:.6g}, tau={fixed_tau:.6g}")

    target = None
    if config.layout == "detection_angles":
        options = run_options(config, settings).solver_options
        target = simulate_pulse(
            params, build_pulse(config, params, settings), config.solver, options
        )

    return make_layout(
        config.layout,
        params,
        bounds=config.bounds.to_layout_bounds(),
        n_knots=config.n_knots,
        gain_limit=config.gain_limit,
        fixed_g=fixed_g,
        fixed_tau=fixed_tau,
        target=target,
        fout_grid_points=settings.fout_grid_points,
    )


def _write_repeat_outputs(
    config: ExperimentConfig,
    settings: OptoSqueezeSettings,
    store: RunStore,
    summary: RepeatSummary,
    stem: str,
    extra: dict[str, Any] | None = None,
) -> list[Path]:
    out = settings.resolved_out_dir
    cfg = _config_dict(config)
    paths = [store.save(r, run_name(config.name, r.seed), cfg) for r in summary.records]

    document = {
        "config": cfg,
        "seed": config.seed,
        "layout": config.layout,
        "summary": summary.to_dict(),
        **(extra or {}),
    }
    paths.append(write_json(out / f"{stem}-summary.json", document))

    histogram = write_histogram_csv(
        out / f"{stem}-histogram.csv", summary.histogram_counts, summary.histogram_edges
    )
    average = write_average_pulse_csv(
        out / f"{stem}-average-pulse.csv", summary.average_pulse
    )
    for path in (histogram, average):
        paths += [path, write_sidecar(path, cfg, config.seed)]
    return paths


# --- Commands ---


def cmd_simulate(config: ExperimentConfig, settings: OptoSqueezeSettings) -> list[Path]:
    """Simulate the configured pulse and write one result document."""
    params = config.system.to_params()
    pulse = build_pulse(config, params, settings)
    options = run_options(config, settings).solver_options
    v = simulate_pulse(params, pulse, config.solver, options)
    lambda_min = min_eigenvalue(v)

    document = {
        "config": _config_dict(config),
        "seed": config.seed,
        "tau": pulse.tau,
        "effective_gain": effective_gain(pulse, params.kappa),
        "covariance": v.v.tolist(),
        "lambda_min": lambda_min,
        "s_gen": generalized_squeezing(lambda_min),
        "signed_s_gen": signed_squeezing(lambda_min),
        "symplectic_eigenvalues": symplectic_eigenvalues(v.v).tolist(),
        "physical": is_physical(v.v),
    }
    out = settings.resolved_out_dir
    path = write_json(out / f"{config.name}-simulate.json", document)
    logger.info(f"Simulated pulse: S_gen={document['s_gen']:.4f} dB, tau={pulse.tau:.4g}")
    return [path]


def cmd_optimize(config: ExperimentConfig, settings: OptoSqueezeSettings) -> list[Path]:
    """Seeded optimization runs of the configured layout."""
    params = config.system.to_params()
    store = RunStore(settings.resolved_runs_dir)
    layout = build_layout(config, params, settings, store)
    summary = repeat_optimize(
        layout,
        schedule=config.resolved_schedule(),
        n_repeats=config.repeats,
        base_seed=config.seed,
        run=run_options(config, settings),
    )
    return _write_repeat_outputs(config, settings, store, summary, config.name)


def cmd_noisy(config: ExperimentConfig, settings: OptoSqueezeSettings) -> list[Path]:
    """Optimization under control noise, then a robustness study of the best run."""
    params = config.system.to_params()
    store = RunStore(settings.resolved_runs_dir)
    layout = build_layout(config, params, settings, store)
    run = run_options(config, settings)
    rel_sigma = config.noise.rel_sigma
    summary = repeat_optimize(
        layout,
        schedule=config.resolved_schedule(),
        n_repeats=config.repeats,
        base_seed=config.seed,
        run=run,
        noise_sigma=rel_sigma,
    )

    extra: dict[str, Any] = {"rel_sigma": rel_sigma}
    paths: list[Path] = []
    succeeded = [r for r in summary.records if r.succeeded]
    if config.noise.n_samples > 0 and succeeded:
        best = max(succeeded, key=lambda r: r.reported_s_gen)
        study = noise_robustness(
            layout,
            best.best_vector,
            rel_sigma=rel_sigma,
            n_samples=config.noise.n_samples,
            seed=config.seed,
            run=run,
        )
        extra["robustness"] = {
            "seed": best.seed,
            "vector": study.vector,
            "noiseless_s_gen": study.noiseless_s_gen,
            "mean_s_gen": study.mean,
            "n_samples": int(study.samples.size),
            "n_failed": study.n_failed,
        }
        cfg = _config_dict(config)
        samples = write_samples_csv(
            settings.resolved_out_dir / f"{config.name}-noise-samples.csv", study.samples
        )
        if study.samples.size:
            counts, edges = np.histogram(study.samples, bins=30)
            histogram = write_histogram_csv(
                settings.resolved_out_dir / f"{config.name}-noise-histogram.csv",
                counts.tolist(),
                edges.tolist(),
            )
            paths += [histogram, write_sidecar(histogram, cfg, config.seed)]
        paths += [samples, write_sidecar(samples, cfg, config.seed)]

    written = _write_repeat_outputs(
        config, settings, store, summary, config.name, extra
    )
    return written + paths


def cmd_sweep(config: ExperimentConfig, settings: OptoSqueezeSettings) -> list[Path]:
    """Heating-rate sweep, plus fixed-pulse curves and the solver scan if configured."""
    params = config.system.to_params()
    store = RunStore(settings.resolved_runs_dir)
    layout = build_layout(config, params, settings, store)
    run = run_options(config, settings)
    sweep = config.sweep
    out = settings.resolved_out_dir
    cfg = _config_dict(config)

    points = thermal_sweep(
        layout,
        sweep.gamma_values,
        params=params,
        schedule=config.resolved_schedule(),
        repeats=config.repeats,
        base_seed=config.seed,
        n_0=sweep.n_0,
        run=run,
    )
    paths = []
    for k, point in enumerate(points):
        for record in point.records:
            name = run_name(f"{config.name}-gamma{k}", record.seed)
            paths.append(store.save(record, name, cfg))
    tables = [write_sweep_csv(out / f"{config.name}-sweep.csv", points)]

    if sweep.fixed_pulses:
        fixed = fixed_pulse_sweep(
            params,
            [tuple(p) for p in sweep.fixed_pulses],
            sweep.gamma_values,
            n_0=sweep.n_0,
            solver=config.solver,
            options=run.solver_options,
        )
        table = write_fixed_pulse_csv(out / f"{config.name}-fixed-pulses.csv", fixed)
        tables.append(table)
    if sweep.scan_g:
        scan = coupling_scan(
            params,
            sweep.scan_g,
            options=run.solver_options,
            gain_limit=config.gain_limit,
            duration_bounds=config.bounds.duration,
        )
        tables.append(write_scan_csv(out / f"{config.name}-coupling-scan.csv", scan))

    for table in tables:
        paths += [table, write_sidecar(table, cfg, config.seed)]
    return paths


def _detection_dict(entry: DetectionEntry) -> dict[str, Any]:
    result = entry.result
    return {
        "label": entry.label,
        "n_0": entry.n_0,
        "theta_c": result.angles.theta_c,
        "theta_m": result.angles.theta_m,
        "phi": result.angles.phi,
        "variance": result.variance,
        "lambda_min": result.lambda_min,
        "gap": result.gap,
        "trapped": result.trapped,
        "n_evaluations": result.n_evaluations,
    }


def cmd_detect(config: ExperimentConfig, settings: OptoSqueezeSettings) -> list[Path]:
    """Detection-angle study of the configured pulse, thermal and cooled."""
    params = config.system.to_params()
    pulse = build_pulse(config, params, settings)
    detection = config.detection
    report = detection_study(
        params,
        pulse,
        cooled_n0=detection.cooled_n0,
        strategy=detection.to_strategy(config.seed),
        solver=config.solver,
        options=run_options(config, settings).solver_options,
        landscape_grid=detection.landscape_grid,
    )
    out = settings.resolved_out_dir
    cfg = _config_dict(config)
    document = {
        "config": cfg,
        "seed": config.seed,
        "entries": [_detection_dict(e) for e in report.entries],
    }
    paths = [write_json(out / f"{config.name}-detect.json", document)]
    for entry in report.entries:
        if entry.landscape is not None:
            path = write_landscape_csv(
                out / f"{config.name}-landscape-{entry.label}.csv", entry.landscape
            )
            paths += [path, write_sidecar(path, cfg, config.seed)]
    return paths


def cmd_landscape(
    config: ExperimentConfig, settings: OptoSqueezeSettings
) -> list[Path]:
    """Phi-eliminated variance over the detection angles of the pulse's final state."""
    params = config.system.to_params()
    pulse = build_pulse(config, params, settings)
    v = simulate_pulse(
        params, pulse, config.solver, run_options(config, settings).solver_options
    )
    landscape = angle_landscape(
        v, config.detection.landscape_grid, (0.0, config.detection.theta_max)
    )
    path = write_landscape_csv(
        settings.resolved_out_dir / f"{config.name}-landscape.csv", landscape
    )
    logger.info(
        f"Landscape minimum {landscape.minimum:.6g}, lambda_min {min_eigenvalue(v):.6g}"
    )
    return [path, write_sidecar(path, _config_dict(config), config.seed)]


def cmd_report(config: ExperimentConfig, settings: OptoSqueezeSettings) -> list[Path]:
    """Aggregate every stored run into min/mean/max best squeezing per layout."""
    store = RunStore(settings.resolved_runs_dir)
    by_layout: dict[str, list[float]] = defaultdict(list)
    for _, record in store.list_runs():
        if record.succeeded:
            by_layout[record.layout].append(record.reported_s_gen)
    if not by_layout:
        logger.warning(f"No stored runs in {store.runs_dir}")

    rows = [
        {
            "layout": layout,
            "n_runs": len(values),
            "min_db": min(values),
            "mean_db": float(np.mean(values)),
            "max_db": max(values),
        }
        for layout, values in sorted(by_layout.items())
    ]
    path = write_report_csv(settings.resolved_out_dir / "report.csv", rows)
    return [path, write_sidecar(path, _config_dict(config), config.seed)]


COMMANDS = {
    "simulate": cmd_simulate,
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
    "noisy": cmd_noisy,
    "detect": cmd_detect,
    "landscape": cmd_landscape,
    "report": cmd_report,
}
