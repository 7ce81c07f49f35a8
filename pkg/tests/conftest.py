"""Pytest configuration and shared fixtures for optosqueeze tests.

This module provides common fixtures used across all test modules,
including isolated settings, small system parameters and relaxed solver
options for quick runs. Statistical acceptance runs are marked `slow` and
only execute with --run-slow.
"""

import numpy as np
import pytest

from optosqueeze.config import OptoSqueezeSettings
from optosqueeze.dynamics import BipartiteCovariance, SolverOptions, SystemParams
from optosqueeze.harness import RunOptions


def pytest_addoption(parser):
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="Run slow statistical acceptance tests",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="function")
def test_settings(tmp_path):
    """Create test settings with an isolated output directory.

    Args:
        tmp_path: Pytest fixture providing a temporary directory.

    Returns:
        OptoSqueezeSettings: Settings instance configured for testing.
    """
    return OptoSqueezeSettings(
        out_dir=str(tmp_path),
        runs_dir="runs",
        log_level="DEBUG",
        workers=1,
        record_timing=False,
        rtol=1e-8,
        atol=1e-12,
        fout_grid_points=256,
    )


@pytest.fixture
def table_params() -> SystemParams:
    """Default system parameters."""
    return SystemParams()


@pytest.fixture
def cold_params() -> SystemParams:
    """Small occupations and no damping, cheap to integrate."""
    return SystemParams(gamma=0.0, n_th=0.0, n_0=5.0)


@pytest.fixture
def fast_options() -> SolverOptions:
    """Relaxed tolerances and a coarse output-mode grid."""
    return SolverOptions(rtol=1e-8, atol=1e-12, fout_grid_points=256)


@pytest.fixture
def fast_run(fast_options) -> RunOptions:
    return RunOptions(solver_options=fast_options)


def random_covariance(rng: np.random.Generator, n_0: float = 1.0) -> BipartiteCovariance:
    """A random physical two-mode covariance: S (nu I) S^T for a random symplectic S."""
    from scipy.linalg import expm

    from optosqueeze.dynamics.covariance import symplectic_form

    omega = symplectic_form(2)
    h = rng.normal(scale=0.4, size=(4, 4))
    s = expm(omega @ (h + h.T))
    nu = 1.0 + rng.uniform(0.0, 2.0 * n_0, size=2)
    v = s @ np.diag(np.repeat(nu, 2)) @ s.T
    return BipartiteCovariance(v=0.5 * (v + v.T))


@pytest.fixture
def covariance_factory():
    """Factory for random physical covariances."""
    return random_covariance
