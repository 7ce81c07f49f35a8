"""Acquisition functions for minimization.

Both functions return a score to be maximized.
"""

from collections.abc import Callable
from functools import partial

import numpy as np
from scipy.stats import norm

from optosqueeze import constants

Acquisition = Callable[[np.ndarray, np.ndarray], np.ndarray]


def acquisition_ei(
    mean: np.ndarray | float, std: np.ndarray | float, y_best: float
) -> np.ndarray:
    """Expected improvement below the incumbent.

    Args:
        mean: Posterior mean.
        std: Posterior standard deviation, non-negative.
        y_best: Incumbent (smallest) value.

    Returns:
        (y_best - mean) Phi(z) + std phi(z) with z = (y_best - mean) / std,
        and max(y_best - mean, 0) where std is 0.
    """
    mean = np.asarray(mean, dtype=float)
    std = np.asarray(std, dtype=float)
    improvement = y_best - mean
    positive = std > 0
    z = np.divide(
        improvement, std, out=np.zeros_like(improvement * std), where=positive
    )
    ei = improvement * norm.cdf(z) + std * norm.pdf(z)
    return np.where(positive, np.maximum(ei, 0.0), np.maximum(improvement, 0.0))


def acquisition_lcb(
    mean: np.ndarray | float,
    std: np.ndarray | float,
    beta: float = constants.LCB_BETA,
) -> np.ndarray:
    """Negated lower confidence bound, -(mean - beta * std)."""
    return -(np.asarray(mean, dtype=float) - beta * np.asarray(std, dtype=float))


def make_acquisition(
    kind: str, y_best: float, beta: float = constants.LCB_BETA
) -> Acquisition:
    """Bind an acquisition to its incumbent or weight.

    Args:
        kind: "ei" or "lcb".
        y_best: Incumbent value (EI only).
        beta: Confidence weight (LCB only).

    Returns:
        A callable mapping (mean, std) to scores.

    Raises:
        ValueError: For an unknown kind.
    """
    if kind == "ei":
        return partial(acquisition_ei, y_best=y_best)
    if kind == "lcb":
        return partial(acquisition_lcb, beta=beta)
    raise ValueError(f"Unknown acquisition: {kind}")
