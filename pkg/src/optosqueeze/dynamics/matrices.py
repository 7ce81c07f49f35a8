"""Drift and diffusion matrices of the linearized optomechanical system.

The output-mode rows can be demodulated by a local-oscillator phase: the
cavity quadratures entering the detected mode are rotated by
R(phase) = [[cos, sin], [-sin, cos]]. At phase 0 the matrices reduce to the
undemodulated forms.
"""

import numpy as np

from optosqueeze.dynamics.types import SystemParams


def lo_rotation(phase: float) -> np.ndarray:
    """Rotation applied to the cavity quadratures by the local oscillator."""
    c, s = np.cos(phase), np.sin(phase)
    return np.array([[c, s], [-s, c]])


def build_drift_A(params: SystemParams, g: float, delta: float) -> np.ndarray:
    """Drift matrix of the cavity and mechanics quadratures.

    Args:
        params: System parameters.
        g: Coupling rate.
        delta: Full detuning Delta (blue sideband at -omega_m).

    Returns:
        4x4 drift matrix.
    """
    k = params.kappa
    return np.array(
        [
            [-k, delta, 0.0, 0.0],
            [-delta, -k, 2.0 * g, 0.0],
            [0.0, 0.0, 0.0, params.omega_m],
            [2.0 * g, 0.0, -params.omega_m, -params.gamma],
        ]
    )


def build_extended_B(
    params: SystemParams,
    g: float,
    delta: float,
    fout_val: float,
    lo_phase: float = 0.0,
) -> np.ndarray:
    """Drift matrix of the system extended by the output-mode accumulator.

    Args:
        params: System parameters.
        g: Coupling rate.
        delta: Full detuning.
        fout_val: Output-mode weighting at the current time.
        lo_phase: Demodulation phase of the detected mode.

    Returns:
        6x6 drift matrix with sqrt(2 kappa) f_out R(lo_phase) feeding the
        output rows from the cavity columns.
    """
    b = np.zeros((6, 6))
    b[:4, :4] = build_drift_A(params, g, delta)
    b[4:, :2] = np.sqrt(2.0 * params.kappa) * fout_val * lo_rotation(lo_phase)
    return b


def build_extended_F(
    params: SystemParams,
    fout_val: float,
    lo_phase: float = 0.0,
) -> np.ndarray:
    """Diffusion matrix of the extended system.

    Args:
        params: System parameters.
        fout_val: Output-mode weighting at the current time.
        lo_phase: Demodulation phase of the detected mode.

    Returns:
        Symmetric 6x6 diffusion matrix. The output block is f_out^2 sigma_v,
        the variance of the -f_out X_in term of the input-output relation.
    """
    k = params.kappa
    f = np.zeros((6, 6))
    f[:4, :4] = np.diag([2.0 * k, 2.0 * k, 0.0, 4.0 * params.gamma_heat])

    cross = -fout_val * np.sqrt(2.0 * k) * params.sigma_v * lo_rotation(lo_phase).T
    f[:2, 4:] = cross
    f[4:, :2] = cross.T
    f[4:, 4:] = fout_val * fout_val * params.sigma_v * np.eye(2)
    return f
