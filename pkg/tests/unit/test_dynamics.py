"""Unit tests for the drift/diffusion matrices and covariance helpers."""

import math

import numpy as np
import pytest

from optosqueeze.dynamics import (
    ExtendedCovariance,
    SystemParams,
    build_drift_A,
    build_extended_B,
    build_extended_F,
    extract_bipartite,
    initial_covariance,
    is_physical,
    lo_rotation,
    symplectic_eigenvalues,
)


def test_drift_zero_coupling_decouples():
    """With g = 0 and Delta = 0 only the decay and mechanical rotation remain."""
    params = SystemParams(gamma=0.0, omega_m=2.0)
    a = build_drift_A(params, g=0.0, delta=0.0)
    expected = np.array(
        [
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 2.0],
            [0.0, 0.0, -2.0, 0.0],
        ]
    )
    np.testing.assert_array_equal(a, expected)
    assert not a[:2, 2:].any() and not a[2:, :2].any()


def test_drift_default_entries():
    """Table defaults with g = 0.1 on the blue sideband."""
    a = build_drift_A(SystemParams(), g=0.1, delta=-2.0)
    assert a[1, 2] == pytest.approx(0.2)
    assert a[3, 0] == pytest.approx(0.2)
    assert a[0, 1] == -2.0
    assert a[3, 3] == pytest.approx(-2.8e-10)


def test_extended_b_output_rows():
    """The output rows carry sqrt(2 kappa) f_out, rotated by the LO phase."""
    params = SystemParams()
    assert not build_extended_B(params, 0.1, -2.0, fout_val=0.0)[4:].any()

    b = build_extended_B(params, 0.1, -2.0, fout_val=1.0)
    assert b[4, 0] == pytest.approx(math.sqrt(2.0))
    assert b[5, 1] == pytest.approx(math.sqrt(2.0))
    assert b[4, 1] == 0.0

    rotated = build_extended_B(params, 0.1, -2.0, fout_val=1.0, lo_phase=0.3)
    np.testing.assert_allclose(rotated[4:, :2], math.sqrt(2.0) * lo_rotation(0.3))


def test_extended_f_entries():
    """Diffusion entries for Gamma = 0.063 and f_out = 1."""
    params = SystemParams(gamma=0.063 / 2.26e8, n_th=2.26e8)
    f0 = build_extended_F(params, fout_val=0.0)
    np.testing.assert_allclose(np.diag(f0), [2.0, 2.0, 0.0, 0.252, 0.0, 0.0])
    assert not (f0 - np.diag(np.diag(f0))).any()

    f1 = build_extended_F(params, fout_val=1.0)
    assert f1[3, 3] == pytest.approx(0.252)
    assert f1[0, 4] == pytest.approx(-math.sqrt(2.0))
    assert f1[4, 4] == pytest.approx(1.0)


@pytest.mark.parametrize("phase", [0.0, 0.7, 2.0, -1.3])
def test_extended_f_symmetric(phase):
    """Diffusion stays symmetric at every LO phase."""
    f = build_extended_F(SystemParams(), fout_val=0.4, lo_phase=phase)
    np.testing.assert_allclose(f, f.T, atol=1e-15)


def test_lo_rotation():
    np.testing.assert_array_equal(lo_rotation(0.0), np.eye(2))
    np.testing.assert_allclose(lo_rotation(math.pi / 2), [[0.0, 1.0], [-1.0, 0.0]], atol=1e-15)


@pytest.mark.parametrize(
    ("n_0", "expected"),
    [(0.0, 1.0), (100.0, 201.0), (2.26e8, 4.52e8 + 1)],
)
def test_initial_covariance(n_0, expected):
    """Cavity vacuum, thermal mechanics and an empty accumulator."""
    u = initial_covariance(SystemParams(n_0=n_0))
    np.testing.assert_array_equal(np.diag(u.u), [1.0, 1.0, expected, expected, 0.0, 0.0])
    assert u.t == 0.0


def test_extract_bipartite():
    """The mechanics and output rows and columns are kept."""
    v = extract_bipartite(ExtendedCovariance(u=np.diag([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])))
    np.testing.assert_array_equal(v.v, np.diag([3.0, 4.0, 5.0, 6.0]))


def test_symplectic_eigenvalues_and_physicality():
    """Vacuum sits on the physicality bound, thermal states above it."""
    np.testing.assert_allclose(symplectic_eigenvalues(np.eye(4)), [1.0, 1.0])
    np.testing.assert_allclose(symplectic_eigenvalues(np.diag([3.0, 3.0, 1.0, 1.0])), [1.0, 3.0])
    assert is_physical(np.eye(4))
    assert not is_physical(0.5 * np.eye(4))


def test_system_params_validation():
    """Negative damping and a shot-noise variance other than 1 are rejected."""
    with pytest.raises(ValueError):
        SystemParams(gamma=-1.0)
    with pytest.raises(ValueError):
        SystemParams(sigma_v=2.0)
    assert SystemParams(gamma=0.0).gamma_heat == 0.0
    with pytest.raises(ValueError):
        SystemParams(gamma=0.0).with_heating_rate(1.0)


def test_with_heating_rate():
    """n_th follows from Gamma / gamma."""
    params = SystemParams().with_heating_rate(2.8)
    assert params.gamma_heat == pytest.approx(2.8)
    assert params.n_th == pytest.approx(1e10)
