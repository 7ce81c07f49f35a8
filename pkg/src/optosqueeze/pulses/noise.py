"""Truncated-Gaussian control noise.

Each knot receives an independent zero-mean perturbation whose standard
deviation is a fixed fraction of the knot value. Draws beyond the truncation
width are rejected and redrawn (never clipped).
"""

import numpy as np

from optosqueeze import constants
from optosqueeze.pulses.types import PiecewiseLinearProfile


def truncated_normal(
    size: int,
    rng: np.random.Generator,
    truncation: float = constants.NOISE_TRUNCATION,
) -> np.ndarray:
    """Draw standard normal samples restricted to [-truncation, truncation].

    Args:
        size: Number of samples.
        rng: Seeded generator; consumed in a deterministic order.
        truncation: Half-width of the window in standard deviations.

    Returns:
        Array of shape (size,).
    """
    samples = rng.standard_normal(size)
    rejected = np.abs(samples) > truncation
    while np.any(rejected):
        samples[rejected] = rng.standard_normal(int(rejected.sum()))
        rejected = np.abs(samples) > truncation
    return samples


def apply_control_noise(
    p: PiecewiseLinearProfile,
    rel_sigma: float,
    rng: np.random.Generator,
    truncation: float = constants.NOISE_TRUNCATION,
) -> PiecewiseLinearProfile:
    """Perturb every knot with relative truncated-Gaussian noise.

    Args:
        p: Profile to perturb.
        rel_sigma: Standard deviation relative to each knot value.
        rng: Seeded generator.
        truncation: Truncation width in standard deviations.

    Returns:
        A new profile with knots g_i (1 + rel_sigma z_i), |z_i| <= truncation.

    Raises:
        ValueError: If rel_sigma is negative.
    """
    if rel_sigma < 0:
        raise ValueError(f"rel_sigma must be non-negative, got {rel_sigma}")
    if rel_sigma == 0:
        return p

    z = truncated_normal(len(p.knots), rng, truncation)
    noisy = p.values * (1.0 + rel_sigma * z)
    return PiecewiseLinearProfile(knots=tuple(noisy), tau=p.tau)
