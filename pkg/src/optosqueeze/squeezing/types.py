"""Data types for squeezing detection."""

import math
from dataclasses import dataclass, field

import numpy as np

from optosqueeze import constants


@dataclass(frozen=True)
class DetectionAngles:
    """Homodyne angles of the generalized two-mode quadrature.

    Attributes:
        theta_c: Rotation of the first (mechanical) quadrature pair, in [0, pi).
        theta_m: Rotation of the second (output) quadrature pair, in [0, pi).
        phi: Beamsplitter mixing angle, in [-pi/2, pi/2].
    """

    theta_c: float
    theta_m: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        for name in ("theta_c", "theta_m"):
            value = getattr(self, name)
            if not 0.0 <= value < math.pi:
                raise ValueError(f"{name} must lie in [0, pi), got {value}")
        if not -math.pi / 2 <= self.phi <= math.pi / 2:
            raise ValueError(f"phi must lie in [-pi/2, pi/2], got {self.phi}")

    @classmethod
    def wrapped(
        cls, theta_c: float, theta_m: float, phi: float = 0.0
    ) -> "DetectionAngles":
        """Build angles after reducing both thetas modulo pi."""
        return cls(
            theta_c=float(theta_c) % math.pi, theta_m=float(theta_m) % math.pi, phi=phi
        )


@dataclass(frozen=True)
class DetectionStrategy:
    """Search settings for the detection angles.

    Attributes:
        method: "grid" (coarse grid then Nelder-Mead), "lbfgsb" (multi-start
            gradient search) or "bayesopt".
        grid_n: Grid points per axis for the "grid" method.
        refine_starts: Number of best grid cells or random starts refined.
        seed: Seed for the stochastic methods.
        trapped_tolerance: Gap to the minimal eigenvalue above which the
            search counts as trapped.
    """

    method: str = "grid"
    grid_n: int = constants.DETECTION_GRID
    refine_starts: int = 3
    seed: int = 0
    trapped_tolerance: float = constants.TRAPPED_TOLERANCE

    def __post_init__(self) -> None:
        if self.method not in ("grid", "lbfgsb", "bayesopt"):
            raise ValueError(f"Unknown detection method: {self.method}")
        if self.grid_n < 2:
            raise ValueError(f"grid_n must be at least 2, got {self.grid_n}")


@dataclass
class DetectionResult:
    """Outcome of a detection-angle search.

    Attributes:
        angles: Best angles found.
        variance: Generalized-quadrature variance at those angles.
        lambda_min: Minimal eigenvalue of the covariance (global optimum).
        n_evaluations: Objective evaluations spent.
        trapped: Whether the search stopped short of lambda_min.
    """

    angles: DetectionAngles
    variance: float
    lambda_min: float
    n_evaluations: int
    trapped: bool

    @property
    def gap(self) -> float:
        return self.variance - self.lambda_min


@dataclass
class AngleLandscape:
    """Phi-eliminated variance over a (theta_c, theta_m) grid.

    Rows follow theta_c and columns follow theta_m.
    """

    theta_c: np.ndarray
    theta_m: np.ndarray
    values: np.ndarray = field(repr=False)

    @property
    def minimum(self) -> float:
        return float(np.min(self.values))
