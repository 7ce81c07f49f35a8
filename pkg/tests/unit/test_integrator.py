"""Unit tests for the adaptive Lyapunov integrator."""

import math
import time

import numpy as np
import pytest

from optosqueeze.dynamics import (
    SolverOptions,
    SystemParams,
    extract_bipartite,
    initial_covariance,
    integrate_covariance,
    integrate_lyapunov,
    is_physical,
    symplectic_eigenvalues,
)
from optosqueeze.exceptions import IntegrationDiverged, NonPositiveArgument, NotSymmetric
from optosqueeze.pulses import PulseConfig
from optosqueeze.squeezing import min_eigenvalue


def test_scalar_relaxation():
    """dU/dt = -2U + 2 relaxes to 1 as 1 + (u0 - 1) exp(-2t)."""
    u = integrate_lyapunov(
        lambda t: np.array([[-1.0]]),
        lambda t: np.array([[2.0]]),
        np.array([[3.0]]),
        tau=1.0,
        options=SolverOptions(rtol=1e-10, atol=1e-14),
    )
    assert u[0, 0] == pytest.approx(1.0 + 2.0 * math.exp(-2.0), rel=1e-8)


def test_step_callback_sees_symmetric_states():
    """Every accepted step is reported, symmetrized, in increasing time."""
    times = []

    def record(t, u):
        times.append(t)
        np.testing.assert_array_equal(u, u.T)

    drift = np.array([[-1.0, 0.5], [0.2, -0.7]])
    integrate_lyapunov(
        lambda t: drift, lambda t: np.eye(2), np.eye(2), tau=2.0, on_step=record
    )
    assert times
    assert np.all(np.diff(times) > 0)
    assert times[-1] == pytest.approx(2.0)


def test_overflow_raises():
    """Unbounded growth trips the overflow guard."""
    with pytest.raises(IntegrationDiverged):
        integrate_lyapunov(
            lambda t: np.array([[5.0]]),
            lambda t: np.array([[0.0]]),
            np.array([[1.0]]),
            tau=100.0,
            options=SolverOptions(overflow_guard=1e10),
        )


def test_rejects_bad_inputs():
    zero = lambda t: np.zeros((2, 2))  # noqa: E731
    with pytest.raises(NonPositiveArgument):
        integrate_lyapunov(zero, zero, np.eye(2), tau=0.0)
    with pytest.raises(NotSymmetric):
        integrate_lyapunov(zero, zero, np.array([[1.0, 1.0], [0.0, 1.0]]), tau=1.0)


def test_zero_coupling_keeps_modes_apart(cold_params, fast_options):
    """g = 0: thermal mechanics untouched, output mode collects pure vacuum."""
    pulse = PulseConfig.constant(0.0, 30.0)
    u = integrate_covariance(cold_params, pulse, initial_covariance(cold_params), fast_options)
    v = extract_bipartite(u).v
    thermal = 2.0 * cold_params.n_0 + 1.0

    np.testing.assert_allclose(np.diag(v), [thermal, thermal, 1.0, 1.0], rtol=1e-6)
    np.testing.assert_allclose(v - np.diag(np.diag(v)), 0.0, atol=1e-6)
    assert u.t == pytest.approx(30.0)
    assert min_eigenvalue(extract_bipartite(u)) == pytest.approx(1.0, abs=1e-6)


def test_coupled_state_is_physical(cold_params, fast_options):
    """A squeezing pulse ends in a symmetric, physical bipartite state."""
    pulse = PulseConfig.constant(0.3, 5.0)
    v = extract_bipartite(
        integrate_covariance(cold_params, pulse, initial_covariance(cold_params), fast_options)
    ).v
    np.testing.assert_allclose(v, v.T, atol=1e-10 * np.max(np.abs(v)))
    assert is_physical(v, tolerance=1e-5)


def test_tolerance_refinement_is_stable(cold_params):
    """Tightening the tolerances barely moves the minimal eigenvalue."""
    pulse = PulseConfig.constant(0.2, 10.0)
    u0 = initial_covariance(cold_params)
    loose_options = SolverOptions(rtol=1e-9, atol=1e-14)
    tight_options = SolverOptions(rtol=1e-11, atol=1e-16)
    loose = integrate_covariance(cold_params, pulse, u0, loose_options)
    tight = integrate_covariance(cold_params, pulse, u0, tight_options)
    db_loose = -10 * math.log10(min_eigenvalue(extract_bipartite(loose)))
    db_tight = -10 * math.log10(min_eigenvalue(extract_bipartite(tight)))
    assert abs(db_loose - db_tight) < 1e-4


def test_system_block_physical_at_every_step():
    """The cavity and mechanics stay a physical state at each accepted step."""
    params = SystemParams(gamma=1e-4, n_th=10.0, n_0=10.0)
    worst = []

    def check(t, u):
        worst.append(float(np.min(symplectic_eigenvalues(u[:4, :4]))))

    pulse = PulseConfig.constant(0.3, 5.0)
    u0 = initial_covariance(params)
    integrate_covariance(params, pulse, u0, SolverOptions(), check)
    assert len(worst) > 1
    assert min(worst) >= 1.0 - 1e-8


def test_table_parameters_are_tractable_at_default_tolerances():
    """A large initial occupation does not collapse the step size."""
    params = SystemParams()
    steps = []
    pulse = PulseConfig.constant(0.5, 0.5)

    start = time.perf_counter()
    u0 = initial_covariance(params)
    u = integrate_covariance(
        params, pulse, u0, SolverOptions(), lambda t, u: steps.append(t)
    )
    elapsed = time.perf_counter() - start

    assert len(steps) < 2000
    assert elapsed < 30.0
    assert np.all(np.isfinite(u.u))
    assert u.t == pytest.approx(0.5)
