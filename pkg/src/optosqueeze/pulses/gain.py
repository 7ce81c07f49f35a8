"""Amplitude-gain constraint and the duration reparameterization.

The adiabatic amplitude gain of a constant pulse is exp(2 g^2 tau / kappa).
For time-dependent couplings the exponent uses the integral of g(t)^2, which
reduces to the constant case exactly. Optimizers choose (g, p_gain) and the
duration follows from the gain target, which keeps every pulse below the
gain limit without a separate constraint.
"""

import logging
import math

from optosqueeze import constants
from optosqueeze.exceptions import NonPositiveArgument
from optosqueeze.pulses.profiles import square_integral
from optosqueeze.pulses.types import PulseConfig

logger = logging.getLogger(__name__)


def effective_gain(pulse: PulseConfig, kappa: float = constants.KAPPA) -> float:
    """Adiabatic amplitude gain of a (possibly time-dependent) coupling.

    Args:
        pulse: The pulse.
        kappa: Optical linewidth.

    Returns:
        exp((2 / kappa) * integral of g(t)^2 over [0, tau]).
    """
    return math.exp(2.0 * square_integral(pulse.coupling) / kappa)


def duration_from_gain(
    g_eff: float,
    p_gain: float,
    gain_limit: float = constants.GAIN_LIMIT,
    tau_max: float = constants.DURATION_BOUNDS[1],
    tau_min: float = constants.DURATION_BOUNDS[0],
    kappa: float = constants.KAPPA,
) -> float:
    """Pulse duration that reaches a fraction of the gain limit.

    Args:
        g_eff: Effective (root-mean-square) coupling.
        p_gain: Proportion of the gain limit, in (0, 1].
        gain_limit: Amplitude-gain ceiling.
        tau_max: Upper duration bound.
        tau_min: Lower duration bound.
        kappa: Optical linewidth.

    Returns:
        kappa * ln(p_gain * gain_limit) / (2 g_eff^2), clamped to
        [tau_min, tau_max]. A target gain of at most 1 clamps to tau_min.

    Raises:
        NonPositiveArgument: If g_eff or p_gain is not positive.
    """
    if not g_eff > 0:
        raise NonPositiveArgument(f"g_eff must be positive, got {g_eff}")
    if not 0 < p_gain <= 1:
        raise NonPositiveArgument(f"p_gain must lie in (0, 1], got {p_gain}")

    target = p_gain * gain_limit
    if target <= 1:
        logger.debug(f"Gain target {target} <= 1, clamping duration to {tau_min}")
        return tau_min

    tau = kappa * math.log(target) / (2.0 * g_eff * g_eff)
    return min(max(tau, tau_min), tau_max)
