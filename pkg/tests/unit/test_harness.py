"""Unit tests for the objective and the optimization experiments.

These runs use the analytic solver and tiny schedules so they stay fast.
"""

import math

import numpy as np
import pytest

from optosqueeze.bayesopt import BoConfig, PhaseSchedule
from optosqueeze.dynamics import BipartiteCovariance, SolverOptions, SystemParams
from optosqueeze.exceptions import ConfigError, EvaluationFailed
from optosqueeze.harness import (
    PulseObjective,
    RunOptions,
    RunRecord,
    coupling_scan,
    decode_and_evaluate,
    detection_study,
    fixed_pulse_sweep,
    make_layout,
    noise_robustness,
    noisy_optimize,
    optimize_once,
    params_at_heating_rate,
    repeat_optimize,
    simulate_pulse,
    stable_initial_occupation,
    summarize_records,
    thermal_sweep,
)
from optosqueeze.pulses import PiecewiseLinearProfile, PulseConfig
from optosqueeze.squeezing import generalized_squeezing, min_eigenvalue

PARAMS = SystemParams(gamma=0.0, n_th=0.0, n_0=5.0)
SCHEDULE = PhaseSchedule(4, 3, 2)
OPTIONS = SolverOptions(rtol=1e-8, atol=1e-12, fout_grid_points=64)
RWA = RunOptions(
    solver="rwa", solver_options=OPTIONS, bo_config=BoConfig(pool_size=200, n_local=20)
)


@pytest.fixture
def const_layout():
    return make_layout("const_coupling", PARAMS, fout_grid_points=64)


def test_simulate_pulse_rejects_unsupported_requests():
    """The analytic solver needs a constant coupling on the sideband."""
    shaped = PulseConfig(
        coupling=PiecewiseLinearProfile(knots=(0.1, 0.2), tau=5.0),
        detuning_offset=PiecewiseLinearProfile.constant(0.0, 5.0),
        fout=PiecewiseLinearProfile.constant(1.0, 5.0),
    )
    with pytest.raises(ConfigError):
        simulate_pulse(PARAMS, shaped, "rwa")
    with pytest.raises(ConfigError):
        simulate_pulse(PARAMS, PulseConfig.constant(0.1, 5.0, delta=0.1), "rwa")
    with pytest.raises(ConfigError):
        simulate_pulse(PARAMS, PulseConfig.constant(0.1, 5.0), "euler")


def test_decode_and_evaluate(const_layout):
    """Returns lambda_min and the matching squeezing in dB."""
    value, s_gen = decode_and_evaluate(const_layout, [0.3, 0.5], solver="rwa", options=OPTIONS)
    pulse = const_layout.decode([0.3, 0.5])
    v = simulate_pulse(PARAMS, pulse, "rwa", OPTIONS)
    assert value == pytest.approx(min_eigenvalue(v))
    assert s_gen == generalized_squeezing(value)
    assert s_gen > 0


def test_decode_and_evaluate_detection_angles():
    target = BipartiteCovariance(v=np.diag([3.0, 0.5, 2.0, 1.0]))
    layout = make_layout("detection_angles", PARAMS, target=target)
    value, _ = decode_and_evaluate(layout, [0.3, 1.2])
    assert value >= 0.5 - 1e-12


def test_decode_and_evaluate_wraps_overflow(const_layout):
    """A tripped overflow guard becomes EvaluationFailed carrying the vector."""
    tight = SolverOptions(overflow_guard=2.0, fout_grid_points=64)
    with pytest.raises(EvaluationFailed) as excinfo:
        decode_and_evaluate(const_layout, [0.3, 0.5], solver="rwa", options=tight)
    assert excinfo.value.vector == [0.3, 0.5]


def test_pulse_objective_validation(const_layout):
    fout_layout = make_layout("fout_only", PARAMS, fixed_g=0.2, fixed_tau=5.0)
    with pytest.raises(ConfigError):
        PulseObjective(const_layout, solver="euler")
    with pytest.raises(ConfigError):
        PulseObjective(const_layout, noise_sigma=0.1)
    with pytest.raises(ConfigError):
        PulseObjective(const_layout, noise_sigma=-0.1)
    with pytest.raises(ConfigError):
        PulseObjective(fout_layout, noise_sigma=0.1, noise_rng=np.random.default_rng(0))


def test_pulse_objective_logs_every_call(const_layout):
    tight = SolverOptions(overflow_guard=2.0, fout_grid_points=64)
    objective = PulseObjective(const_layout, solver="rwa", options=tight)
    with pytest.raises(EvaluationFailed):
        objective(np.array([0.3, 0.5]))
    assert len(objective.log) == 1
    assert objective.log[0].lambda_min is None
    assert objective.log[0].error


def test_optimize_once_record(const_layout):
    record = optimize_once(const_layout, schedule=SCHEDULE, seed=3, run=RWA)
    assert record.seed == 3
    assert record.schedule == (4, 3, 2)
    assert [e.index for e in record.evaluations] == list(range(9))
    assert len(record.incumbent_trace) == 9
    ok = [e.lambda_min for e in record.evaluations if e.status == "ok"]
    assert record.best_lambda_min == min(ok)
    assert record.best_s_gen == generalized_squeezing(record.best_lambda_min)
    assert record.best_tau is not None
    assert list(record.best_knots) == ["coupling"]
    assert record.solver == "rwa"
    assert record.params["n_0"] == 5.0


def test_optimize_once_is_reproducible(const_layout):
    a = optimize_once(const_layout, schedule=SCHEDULE, seed=11, run=RWA)
    b = optimize_once(const_layout, schedule=SCHEDULE, seed=11, run=RWA)
    assert [e.vector for e in a.evaluations] == [e.vector for e in b.evaluations]
    assert a.best_s_gen == b.best_s_gen


def test_optimize_once_with_gradient_optimizer(const_layout):
    run = RunOptions(solver="rwa", optimizer="lbfgsb", solver_options=OPTIONS)
    record = optimize_once(const_layout, schedule=SCHEDULE, seed=0, run=run)
    assert record.schedule == (9, 0, 0)
    assert {e.phase for e in record.evaluations} == {"lbfgsb"}
    assert record.optimizer == "lbfgsb"

    with pytest.raises(ConfigError):
        optimize_once(const_layout, schedule=SCHEDULE, run=RunOptions(optimizer="cmaes"))


def test_noisy_optimize_reports_noiseless_value(const_layout):
    record = noisy_optimize(const_layout, schedule=SCHEDULE, rel_sigma=0.1, seed=2, run=RWA)
    assert record.noise_sigma == 0.1
    assert record.final_noiseless_s_gen is not None
    assert record.reported_s_gen == record.final_noiseless_s_gen
    _, expected = decode_and_evaluate(
        const_layout, record.best_vector, solver="rwa", options=OPTIONS
    )
    assert record.final_noiseless_s_gen == pytest.approx(expected)


def test_repeat_optimize_summary(const_layout):
    summary = repeat_optimize(
        const_layout, schedule=SCHEDULE, n_repeats=3, base_seed=5, run=RWA
    )
    assert [r.seed for r in summary.records] == [5, 6, 7]
    assert summary.minimum <= summary.mean <= summary.maximum
    assert sum(summary.histogram_counts) == 3
    assert len(summary.histogram_edges) == len(summary.histogram_counts) + 1
    profiles = {row.profile for row in summary.average_pulse}
    assert profiles == {"coupling", "tau"}
    assert summary.to_dict()["seeds"] == [5, 6, 7]

    with pytest.raises(ValueError):
        repeat_optimize(const_layout, n_repeats=0)


def test_summarize_records_counts_failures():
    failed = RunRecord(seed=0, layout="const_coupling", schedule=(1, 1, 1), params={})
    good = RunRecord(
        seed=1,
        layout="const_coupling",
        schedule=(1, 1, 1),
        params={},
        best_vector=[0.3, 0.5],
        best_lambda_min=0.5,
        best_s_gen=3.0103,
        best_tau=10.0,
        best_knots={"coupling": [0.3]},
    )
    summary = summarize_records([failed, good])
    assert summary.n_failed == 1
    assert summary.best_s_gen == [3.0103]
    assert summary.spread == 0.0

    empty = summarize_records([failed])
    assert math.isnan(empty.mean)
    assert empty.histogram_counts == []


def test_heating_rate_helpers():
    assert stable_initial_occupation(2.0) == 1e4
    assert stable_initial_occupation(0.5) == 100.0
    params = params_at_heating_rate(SystemParams(), 0.063)
    assert params.gamma_heat == pytest.approx(0.063)
    assert params.n_0 == 100.0
    assert params_at_heating_rate(SystemParams(), 0.063, n_0=7.0).n_0 == 7.0
    with pytest.raises(ConfigError):
        params_at_heating_rate(SystemParams(), -1.0)
    with pytest.raises(ConfigError):
        params_at_heating_rate(PARAMS, 0.1)


def test_thermal_sweep_seeds_and_points(const_layout):
    """Point k uses seeds base + k * repeats + i."""
    base = SystemParams(gamma=1e-3, n_th=0.0, n_0=0.0)
    points = thermal_sweep(
        const_layout,
        [0.001, 0.01],
        params=base,
        schedule=SCHEDULE,
        repeats=2,
        base_seed=10,
        n_0=0.0,
        run=RWA,
    )
    assert [p.gamma_heat for p in points] == [0.001, 0.01]
    assert [r.seed for r in points[1].records] == [12, 13]
    assert points[0].n_th == pytest.approx(1.0)
    assert all(p.best_db >= p.mean_db for p in points)

    with pytest.raises(ConfigError):
        thermal_sweep(const_layout, [], run=RWA)


def test_fixed_pulse_sweep_loses_squeezing_with_heating():
    base = SystemParams(gamma=1e-3, n_th=0.0, n_0=0.0)
    points = fixed_pulse_sweep(
        base, [(0.3, 10.0)], [0.001, 0.5], n_0=0.0, solver="rwa", options=OPTIONS
    )
    assert len(points) == 2
    assert points[0].s_gen_db > points[1].s_gen_db


def test_coupling_scan_runs_both_solvers():
    points = coupling_scan(PARAMS, [0.5], options=OPTIONS)
    assert len(points) == 1
    point = points[0]
    assert point.tau == pytest.approx(math.log(50.0) / 0.5)
    assert math.isfinite(point.numeric_db) and math.isfinite(point.rwa_db)
    assert point.rwa_db > 0


def test_noise_robustness(const_layout):
    study = noise_robustness(
        const_layout, [0.3, 0.5], rel_sigma=0.1, n_samples=20, seed=4, run=RWA
    )
    _, noiseless = decode_and_evaluate(const_layout, [0.3, 0.5], solver="rwa", options=OPTIONS)
    assert study.noiseless_s_gen == pytest.approx(noiseless)
    assert study.samples.size + study.n_failed == 20
    again = noise_robustness(
        const_layout, [0.3, 0.5], rel_sigma=0.1, n_samples=20, seed=4, run=RWA
    )
    np.testing.assert_array_equal(study.samples, again.samples)


def test_detection_study_cooled_reaches_lambda_min():
    params = SystemParams(gamma=0.0, n_th=50.0, n_0=50.0)
    pulse = PulseConfig.constant(0.3, 10.0)
    report = detection_study(
        params, pulse, cooled_n0=0.0, solver="rwa", options=OPTIONS, landscape_grid=8
    )
    assert [e.label for e in report.entries] == ["thermal", "cooled"]
    assert report.thermal.n_0 == 50.0
    cooled = report.cooled.result
    assert cooled.variance == pytest.approx(cooled.lambda_min, abs=1e-6)
    assert report.cooled.landscape.values.shape == (8, 8)
