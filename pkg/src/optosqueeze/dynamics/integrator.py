"""Numerical propagation of the covariance Lyapunov equation.

dU/dt = B(t) U + U B(t)^T + F(t) is stepped with an adaptive 8(5,3)
Runge-Kutta scheme (scipy's DOP853). After every accepted step the state is
symmetrized in place and checked against the overflow guard, so excessive
amplitude gain surfaces as IntegrationDiverged instead of NaN.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy.integrate import DOP853

from optosqueeze import constants
from optosqueeze.dynamics.matrices import build_extended_B, build_extended_F
from optosqueeze.dynamics.types import ExtendedCovariance, SystemParams
from optosqueeze.exceptions import (
    IntegrationDiverged,
    NonPositiveArgument,
    NotSymmetric,
)
from optosqueeze.pulses import PulseConfig, detection_profile

logger = logging.getLogger(__name__)

MatrixFunction = Callable[[float], np.ndarray]
StepCallback = Callable[[float, np.ndarray], None]


@dataclass(frozen=True)
class SolverOptions:
    """Numerical settings shared by every covariance integration.

    Attributes:
        rtol: Relative tolerance of the step control.
        atol: Absolute tolerance of the step control.
        atol_scale: Floor on the absolute tolerance per unit of the largest
            initial covariance entry.
        overflow_guard: Largest admissible matrix entry magnitude.
        demodulate: Detect the output mode at the blue sideband.
        fout_grid_points: Grid size of the optimal output-mode profile.
    """

    rtol: float = constants.RTOL
    atol: float = constants.ATOL
    atol_scale: float = constants.ATOL_SCALE
    overflow_guard: float = constants.OVERFLOW_GUARD
    demodulate: bool = True
    fout_grid_points: int = constants.FOUT_GRID_POINTS


def integrate_lyapunov(
    drift: MatrixFunction,
    diffusion: MatrixFunction,
    u0: np.ndarray,
    tau: float,
    options: SolverOptions | None = None,
    on_step: StepCallback | None = None,
) -> np.ndarray:
    """Integrate a Lyapunov equation with time-dependent matrices.

    Args:
        drift: B(t).
        diffusion: F(t).
        u0: Symmetric initial covariance.
        tau: Final time.
        options: Tolerances and overflow guard.
        on_step: Called with (t, U) after every accepted, symmetrized step.

    Returns:
        U(tau), symmetrized.

    Raises:
        NonPositiveArgument: If tau is not positive.
        NotSymmetric: If u0 is not symmetric.
        IntegrationDiverged: On overflow, non-finite entries or step failure.
    """
    options = options or SolverOptions()
    if not tau > 0:
        raise NonPositiveArgument(f"Integration time must be positive, got {tau}")

    u0 = np.asarray(u0, dtype=float)
    n = u0.shape[0]
    scale = max(1.0, float(np.max(np.abs(u0))))
    if np.max(np.abs(u0 - u0.T)) > constants.SYMMETRY_TOLERANCE * scale:
        raise NotSymmetric("Initial covariance is not symmetric")

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        bu = drift(t) @ y.reshape(n, n)
        return (bu + bu.T + diffusion(t)).ravel()

    # Near-zero entries cannot be resolved below the round-off of the largest one.
    atol = max(options.atol, options.atol_scale * scale)
    solver = DOP853(rhs, 0.0, u0.ravel().copy(), tau, rtol=options.rtol, atol=atol)

    n_steps = 0
    while solver.status == "running":
        message = solver.step()
        if solver.status == "failed":
            raise IntegrationDiverged(
                f"Step control failed at t={solver.t:.6g}: {message}"
            )

        u = solver.y.reshape(n, n)
        u[...] = 0.5 * (u + u.T)
        n_steps += 1

        if not np.all(np.isfinite(u)) or np.max(np.abs(u)) > options.overflow_guard:
            raise IntegrationDiverged(
                f"Covariance exceeded overflow guard {options.overflow_guard:.3g} "
                f"at t={solver.t:.6g}"
            )
        if on_step is not None:
            on_step(solver.t, u)

    logger.debug(f"Lyapunov integration to t={tau:.6g} took {n_steps} steps")
    return solver.y.reshape(n, n).copy()


def integrate_covariance(
    params: SystemParams,
    pulse: PulseConfig,
    u0: ExtendedCovariance,
    options: SolverOptions | None = None,
    on_step: StepCallback | None = None,
) -> ExtendedCovariance:
    """Propagate the extended covariance through one pulse without the RWA.

    The detuning is Delta(t) = -omega_m + delta(t). When demodulation is on,
    the local-oscillator phase is omega_m * t, i.e. the detected mode is
    centred on the blue sideband.

    Args:
        params: System parameters.
        pulse: Coupling, detuning offset and output weighting.
        u0: Initial extended covariance.
        options: Solver settings.
        on_step: Optional per-step callback.

    Returns:
        The extended covariance at t = tau.

    Raises:
        IntegrationDiverged: If the covariance overflows.
    """
    options = options or SolverOptions()
    fout = detection_profile(pulse)
    coupling = pulse.coupling
    offset = pulse.detuning_offset
    omega_m = params.omega_m

    def lo_phase(t: float) -> float:
        return omega_m * t if options.demodulate else 0.0

    def drift(t: float) -> np.ndarray:
        delta = -omega_m + float(offset.value_at(t))
        return build_extended_B(
            params,
            float(coupling.value_at(t)),
            delta,
            float(fout.value_at(t)),
            lo_phase(t),
        )

    def diffusion(t: float) -> np.ndarray:
        return build_extended_F(params, float(fout.value_at(t)), lo_phase(t))

    u = integrate_lyapunov(drift, diffusion, u0.u, pulse.tau, options, on_step)
    return ExtendedCovariance(u=u, t=u0.t + pulse.tau)
