"""Unit tests for the envelope-frame analytic solver."""

import math

import numpy as np
import pytest

from optosqueeze.dynamics import (
    SolverOptions,
    SystemParams,
    adiabatic_gain,
    integrate_rwa_envelope,
    optimal_fout_constant,
    rwa_covariance_constant,
    rwa_envelope_matrices,
)
from optosqueeze.exceptions import GainOverflow, NonPositiveArgument
from optosqueeze.pulses import PiecewiseLinearProfile, square_integral
from optosqueeze.squeezing import generalized_squeezing, min_eigenvalue


@pytest.fixture
def vacuum_params() -> SystemParams:
    """No heating and a mechanical ground state."""
    return SystemParams(gamma=0.0, n_th=0.0, n_0=0.0)


def test_envelope_matrices():
    """Coupling sits on the (Y_c, X_m) and (X_c, Y_m) pairs; heating on the mechanics."""
    params = SystemParams(gamma=0.063 / 2.26e8, n_th=2.26e8)
    drift, diffusion = rwa_envelope_matrices(params, g=0.1)
    assert drift[0, 3] == drift[1, 2] == drift[2, 1] == drift[3, 0] == 0.1
    np.testing.assert_allclose(np.diag(diffusion), [2.0, 2.0, 0.126, 0.126])

    zero, _ = rwa_envelope_matrices(params, g=0.0)
    assert not zero[:2, 2:].any() and not zero[2:, :2].any()


@pytest.mark.parametrize(
    ("g", "tau", "expected"),
    [(0.0, 30.0, 1.0), (0.1, 30.0, math.exp(0.6)), (2.0, math.log(50.0) / 8.0, 50.0)],
)
def test_adiabatic_gain(g, tau, expected):
    assert adiabatic_gain(g, tau) == pytest.approx(expected, rel=1e-12)


def test_zero_coupling_gives_vacuum_output():
    """g = 0: lambda_min = 1 and no squeezing."""
    params = SystemParams(gamma=0.0, n_th=0.0, n_0=5.0)
    fout = optimal_fout_constant(params, 0.0, 30.0, n_points=64)
    v = rwa_covariance_constant(params, 0.0, 30.0, fout)
    np.testing.assert_allclose(v.v, np.diag([11.0, 11.0, 1.0, 1.0]), atol=1e-9)
    assert min_eigenvalue(v) == pytest.approx(1.0, abs=1e-9)
    assert abs(generalized_squeezing(min_eigenvalue(v))) < 1e-9


def test_adiabatic_two_mode_squeezer(vacuum_params):
    """At fixed gain G = exp(0.6) the result tends to (sqrt(G) - sqrt(G - 1))^2.

    Weaker, longer pulses get closer. g = 0.1, tau = 30 still carries finite
    kappa*tau corrections and lands near 0.213 (about 6.72 dB).
    """
    gain = math.exp(0.6)
    expected = (math.sqrt(gain) - math.sqrt(gain - 1.0)) ** 2
    assert expected == pytest.approx(0.1963, abs=5e-4)

    errors = []
    for g in (0.1, 0.03, 0.01):
        tau = 0.3 / g**2
        assert adiabatic_gain(g, tau) == pytest.approx(gain, rel=1e-12)
        fout = optimal_fout_constant(vacuum_params, g, tau, n_points=2048)
        v = rwa_covariance_constant(vacuum_params, g, tau, fout)
        lambda_min = min_eigenvalue(v)
        errors.append(abs(lambda_min - expected) / expected)
        if g == 0.1:
            assert lambda_min == pytest.approx(0.213, rel=0.01)
            assert generalized_squeezing(lambda_min) == pytest.approx(6.72, abs=0.05)

    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 0.005


def test_analytic_matches_stepped_envelope():
    """The matrix-exponential path reproduces the stepped envelope system."""
    params = SystemParams(gamma=0.01, n_th=5.0, n_0=2.0)
    fout = optimal_fout_constant(params, 0.3, 5.0, n_points=64)
    analytic = rwa_covariance_constant(params, 0.3, 5.0, fout)
    stepped = integrate_rwa_envelope(
        params, 0.3, 5.0, fout, SolverOptions(rtol=1e-12, atol=1e-14)
    )
    np.testing.assert_allclose(analytic.v, stepped.v, rtol=1e-6, atol=1e-8)


def test_analytic_with_shaped_weighting():
    """Agreement also holds for a coarse, non-matched output weighting."""
    params = SystemParams(gamma=0.0, n_th=0.0, n_0=1.0)
    fout = PiecewiseLinearProfile(knots=(0.2, 1.0, 0.5, 1.5), tau=4.0)
    fout = fout.scaled(1.0 / math.sqrt(square_integral(fout)))
    analytic = rwa_covariance_constant(params, 0.25, 4.0, fout)
    stepped = integrate_rwa_envelope(
        params, 0.25, 4.0, fout, SolverOptions(rtol=1e-12, atol=1e-14)
    )
    np.testing.assert_allclose(analytic.v, stepped.v, rtol=1e-6, atol=1e-8)


def test_rwa_guard_and_arguments(vacuum_params):
    fout = PiecewiseLinearProfile.constant(1.0, 1.0)
    with pytest.raises(NonPositiveArgument):
        rwa_covariance_constant(vacuum_params, 0.1, 0.0, fout)
    with pytest.raises(GainOverflow):
        rwa_covariance_constant(vacuum_params, 2.0, 100.0, fout.with_tau(100.0), 1e6)


def test_optimal_fout_normalized_and_flat_at_zero(vacuum_params):
    """The matched weighting is normalized; with no coupling it is flat."""
    fout = optimal_fout_constant(vacuum_params, 0.4, 12.0, n_points=128)
    assert square_integral(fout) == pytest.approx(1.0, abs=1e-12)

    flat = optimal_fout_constant(vacuum_params, 0.0, 9.0, n_points=16)
    np.testing.assert_allclose(flat.values, 1.0 / 3.0)

    with pytest.raises(ValueError):
        optimal_fout_constant(vacuum_params, 0.1, 1.0, n_points=1)


def test_optimal_fout_adiabatic_shape(vacuum_params):
    """Away from the cavity transient the weighting grows as exp(g^2 t / kappa)."""
    fout = optimal_fout_constant(vacuum_params, 0.1, 30.0, n_points=301)
    late = fout.times >= 6.0
    ratio = fout.values[late] / np.exp(0.01 * fout.times[late])
    assert ratio.max() / ratio.min() - 1.0 < 0.01
