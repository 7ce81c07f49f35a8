"""Space-filling initial designs."""

import numpy as np
from scipy.stats import qmc


def initial_design(
    bounds: np.ndarray, n: int, seed: int | np.random.Generator | None
) -> np.ndarray:
    """Latin-hypercube sample of n points in a box.

    Args:
        bounds: d x 2 array of (lo, hi) pairs.
        n: Number of points, at least 1.
        seed: Seed or generator; equal seeds give equal designs.

    Returns:
        n x d array with exactly one point per stratum on every axis.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    bounds = np.asarray(bounds, dtype=float)
    sampler = qmc.LatinHypercube(d=bounds.shape[0], seed=seed)
    sample = sampler.random(n)
    return qmc.scale(sample, bounds[:, 0], bounds[:, 1])
