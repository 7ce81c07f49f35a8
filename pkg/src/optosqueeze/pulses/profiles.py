"""Evaluation and normalization of piecewise-linear profiles.

Square-integrals are computed in closed form per segment: a linear segment
from a to b over a slot of length h contributes (h / 3)(a^2 + ab + b^2).
"""

import numpy as np

from optosqueeze.exceptions import DegenerateProfile, OutOfDomain
from optosqueeze.pulses.types import PiecewiseLinearProfile, PulseConfig


def eval_profile(p: PiecewiseLinearProfile, t: float) -> float:
    """Evaluate a profile at time t.

    Args:
        p: The profile.
        t: Evaluation time.

    Returns:
        Linearly interpolated value, exact at knot times.

    Raises:
        OutOfDomain: If t lies outside [0, tau].
    """
    if t < 0 or t > p.tau:
        raise OutOfDomain(f"t={t} outside profile domain [0, {p.tau}]")
    return float(p.value_at(t))


def square_integral(p: PiecewiseLinearProfile) -> float:
    """Closed-form integral of p(t)^2 over [0, tau]."""
    a = p.values[:-1]
    b = p.values[1:]
    return float(p.segment_length / 3.0 * np.sum(a * a + a * b + b * b))


def mean_square(p: PiecewiseLinearProfile) -> float:
    """Time average of p(t)^2, independent of the duration."""
    return square_integral(p) / p.tau


def normalize_fout(p: PiecewiseLinearProfile) -> PiecewiseLinearProfile:
    """Scale a profile to unit square-integral.

    Args:
        p: Output-mode weighting, not identically zero.

    Returns:
        c * p with the integral of (c p)^2 over [0, tau] equal to 1.

    Raises:
        DegenerateProfile: If the profile has zero square-integral.
    """
    norm = square_integral(p)
    if not norm > 0:
        raise DegenerateProfile("Cannot normalize an identically zero profile")
    return p.scaled(1.0 / np.sqrt(norm))


def detection_profile(pulse: PulseConfig) -> PiecewiseLinearProfile:
    """Return the unit-normalized output-mode weighting of a pulse."""
    if pulse.fout_is_normalized:
        return pulse.fout
    return normalize_fout(pulse.fout)
