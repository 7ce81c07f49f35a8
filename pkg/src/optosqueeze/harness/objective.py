"""From optimization vectors to figures of merit.

decode_and_evaluate turns a vector into a pulse, propagates the covariance
with the chosen solver and scores the final state. PulseObjective wraps it
for the optimizers: it returns the minimal eigenvalue, optionally perturbs
the coupling with control noise first, and keeps a log of every call.
"""

import logging
from dataclasses import dataclass

import numpy as np

from optosqueeze import constants
from optosqueeze.dynamics import (
    BipartiteCovariance,
    SolverOptions,
    SystemParams,
    extract_bipartite,
    initial_covariance,
    integrate_covariance,
    rwa_covariance_constant,
)
from optosqueeze.exceptions import (
    ConfigError,
    DegenerateProfile,
    EvaluationFailed,
    GainOverflow,
    IntegrationDiverged,
    NonPositiveEigenvalue,
)
from optosqueeze.harness.layouts import VariableLayout
from optosqueeze.pulses import (
    PulseConfig,
    apply_control_noise,
    detection_profile,
    truncated_normal,
)
from optosqueeze.squeezing import (
    DetectionAngles,
    generalized_squeezing,
    min_eigenvalue,
    var_xgen,
)

logger = logging.getLogger(__name__)

SOLVERS = ("numeric", "rwa")

_RECOVERABLE = (
    IntegrationDiverged,
    GainOverflow,
    DegenerateProfile,
    NonPositiveEigenvalue,
)


def simulate_pulse(
    params: SystemParams,
    pulse: PulseConfig,
    solver: str = "numeric",
    options: SolverOptions | None = None,
) -> BipartiteCovariance:
    """Bipartite covariance after one pulse from the thermal initial state.

    Args:
        params: System parameters.
        pulse: The pulse.
        solver: "numeric" (no rotating-wave approximation) or "rwa".
        options: Solver settings.

    Returns:
        Covariance over (X_m, Y_m, X_out, Y_out) at t = tau.

    Raises:
        ConfigError: If the solver is unknown, or "rwa" gets a pulse that is
            not a constant coupling on the exact sideband.
        IntegrationDiverged: If the numeric propagation overflows.
        GainOverflow: If the analytic propagation overflows.
    """
    options = options or SolverOptions()
    if solver == "numeric":
        u = integrate_covariance(params, pulse, initial_covariance(params), options)
        return extract_bipartite(u)
    if solver == "rwa":
        offset = pulse.detuning_offset
        on_sideband = offset.is_constant and offset.knots[0] == 0
        if not pulse.coupling.is_constant or not on_sideband:
            raise ConfigError(
                "The rwa solver needs a constant coupling and zero detuning offset"
            )
        return rwa_covariance_constant(
            params,
            pulse.coupling.knots[0],
            pulse.tau,
            detection_profile(pulse),
            options.overflow_guard,
        )
    raise ConfigError(f"Unknown solver: {solver}")


def decode_and_evaluate(
    layout: VariableLayout,
    vector: np.ndarray | list[float],
    params: SystemParams | None = None,
    solver: str = "numeric",
    options: SolverOptions | None = None,
) -> tuple[float, float]:
    """Decode a vector, simulate the pulse and score the final state.

    Args:
        layout: Variable layout.
        vector: Point in the layout's box.
        params: System parameters; defaults to the layout's.
        solver: "numeric" or "rwa".
        options: Solver settings.

    Returns:
        (lambda_min, S_gen in dB). For detection_angles the first value is
        the generalized-quadrature variance at the decoded angles.

    Raises:
        EvaluationFailed: If the propagation diverges or the state is
            unphysical.
    """
    params = params or layout.params
    decoded = layout.decode(vector)
    try:
        if isinstance(decoded, DetectionAngles):
            value = var_xgen(layout.target, decoded)
        else:
            value = min_eigenvalue(simulate_pulse(params, decoded, solver, options))
        return value, generalized_squeezing(value)
    except _RECOVERABLE as e:
        raise EvaluationFailed(str(e), vector=[float(x) for x in vector]) from e


def perturb_coupling(
    layout: VariableLayout,
    pulse: PulseConfig,
    rel_sigma: float,
    rng: np.random.Generator,
    truncation: float = constants.NOISE_TRUNCATION,
) -> PulseConfig:
    """Apply relative control noise to the coupling of a decoded pulse.

    Constant layouts perturb their single coupling value; piecewise-linear
    layouts perturb every knot independently. The output weighting is left
    as decoded.
    """
    if rel_sigma == 0:
        return pulse
    if layout.is_constant:
        factor = 1.0 + rel_sigma * truncated_normal(1, rng, truncation)[0]
        return pulse.with_coupling(pulse.coupling.scaled(factor))
    noisy = apply_control_noise(pulse.coupling, rel_sigma, rng, truncation)
    return pulse.with_coupling(noisy)


@dataclass
class EvaluationLog:
    """Outcome of one objective call."""

    lambda_min: float | None
    s_gen: float | None
    error: str | None = None


class PulseObjective:
    """Minimal-eigenvalue objective over a layout's box.

    Every call is logged in order, so the log lines up one to one with the
    optimizer's history.
    """

    def __init__(
        self,
        layout: VariableLayout,
        solver: str = "numeric",
        options: SolverOptions | None = None,
        noise_sigma: float = 0.0,
        noise_rng: np.random.Generator | None = None,
        truncation: float = constants.NOISE_TRUNCATION,
    ):
        """Initialize the objective.

        Args:
            layout: Variable layout, carrying the system parameters.
            solver: "numeric" or "rwa".
            options: Solver settings.
            noise_sigma: Relative control noise applied before each evaluation.
            noise_rng: Generator for the control noise; required when
                noise_sigma is positive.
            truncation: Noise truncation in standard deviations.
        """
        if solver not in SOLVERS:
            raise ConfigError(f"Unknown solver: {solver}")
        if noise_sigma < 0:
            raise ConfigError(f"noise_sigma must be non-negative, got {noise_sigma}")
        if noise_sigma > 0 and noise_rng is None:
            raise ConfigError("A noise generator is required when noise_sigma > 0")
        if noise_sigma > 0 and layout.kind in ("fout_only", "detection_angles"):
            raise ConfigError(f"Layout {layout.kind} has no coupling to perturb")
        self.layout = layout
        self.solver = solver
        self.options = options or SolverOptions()
        self.noise_sigma = noise_sigma
        self.noise_rng = noise_rng
        self.truncation = truncation
        self.log: list[EvaluationLog] = []

    def evaluate(self, vector: np.ndarray) -> tuple[float, float]:
        """(lambda_min, S_gen) of one vector, noisy if noise is configured."""
        if self.noise_sigma == 0:
            return decode_and_evaluate(
                self.layout, vector, solver=self.solver, options=self.options
            )

        pulse = perturb_coupling(
            self.layout,
            self.layout.decode(vector),
            self.noise_sigma,
            self.noise_rng,
            self.truncation,
        )
        try:
            value = min_eigenvalue(
                simulate_pulse(self.layout.params, pulse, self.solver, self.options)
            )
            return value, generalized_squeezing(value)
        except _RECOVERABLE as e:
            raise EvaluationFailed(str(e), vector=[float(x) for x in vector]) from e

    def __call__(self, vector: np.ndarray) -> float:
        try:
            value, s_gen = self.evaluate(vector)
        except EvaluationFailed as e:
            self.log.append(EvaluationLog(lambda_min=None, s_gen=None, error=str(e)))
            raise
        self.log.append(EvaluationLog(lambda_min=value, s_gen=s_gen))
        return value
