"""Pulse profiles for optosqueeze.

This package provides piecewise-linear control profiles, output-mode
normalization, the amplitude-gain constraint and control noise.
"""

from optosqueeze.pulses.gain import duration_from_gain, effective_gain
from optosqueeze.pulses.noise import apply_control_noise, truncated_normal
from optosqueeze.pulses.profiles import (
    detection_profile,
    eval_profile,
    mean_square,
    normalize_fout,
    square_integral,
)
from optosqueeze.pulses.types import PiecewiseLinearProfile, PulseConfig

__all__ = [
    # Types
    "PiecewiseLinearProfile",
    "PulseConfig",
    # Profiles
    "eval_profile",
    "normalize_fout",
    "detection_profile",
    "square_integral",
    "mean_square",
    # Gain constraint
    "effective_gain",
    "duration_from_gain",
    # Noise
    "apply_control_noise",
    "truncated_normal",
]
