"""Data types for the covariance dynamics.

Quadrature ordering of the extended system is (X_c, Y_c, X_m, Y_m, X_out,
Y_out) with the commutator normalization [X, Y] = 2i, so the vacuum has unit
variance in every quadrature.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from optosqueeze import constants


@dataclass(frozen=True)
class SystemParams:
    """Fixed physical parameters of the optomechanical system.

    All rates are in units of kappa. Occupations are dimensionless.

    Attributes:
        kappa: Optical linewidth (amplitude decay rate).
        gamma: Mechanical damping rate.
        omega_m: Mechanical frequency.
        n_th: Mean bath occupation.
        n_0: Initial mechanical occupation.
        sigma_v: Shot-noise variance, fixed at 1.
    """

    kappa: float = constants.KAPPA
    gamma: float = constants.MECHANICAL_DAMPING
    omega_m: float = constants.MECHANICAL_FREQUENCY
    n_th: float = constants.BATH_OCCUPATION
    n_0: float = constants.INITIAL_OCCUPATION
    sigma_v: float = constants.SHOT_NOISE_VARIANCE

    def __post_init__(self) -> None:
        """Validate parameter ranges."""
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be non-negative, got {self.gamma}")
        if not self.omega_m > 0:
            raise ValueError(f"omega_m must be positive, got {self.omega_m}")
        if self.n_th < 0 or self.n_0 < 0:
            raise ValueError(
                f"Occupations must be non-negative, got n_th={self.n_th}, n_0={self.n_0}"
            )
        if self.sigma_v != 1.0:
            raise ValueError(f"sigma_v is fixed at 1, got {self.sigma_v}")

    @property
    def gamma_heat(self) -> float:
        """Heating rate Gamma = gamma * n_th."""
        return self.gamma * self.n_th

    def with_heating_rate(self, gamma_heat: float) -> "SystemParams":
        """Return a copy whose bath occupation yields the given heating rate.

        Raises:
            ValueError: If gamma is zero (the heating rate cannot be tuned).
        """
        if self.gamma == 0:
            raise ValueError("Cannot set a heating rate with gamma = 0")
        return replace(self, n_th=gamma_heat / self.gamma)

    def with_initial_occupation(self, n_0: float) -> "SystemParams":
        return replace(self, n_0=n_0)

    def to_dict(self) -> dict[str, float]:
        return {
            "kappa": self.kappa,
            "gamma": self.gamma,
            "omega_m": self.omega_m,
            "n_th": self.n_th,
            "n_0": self.n_0,
            "sigma_v": self.sigma_v,
        }


@dataclass
class ExtendedCovariance:
    """The 6x6 covariance matrix of cavity, mechanics and output mode.

    Attributes:
        u: Symmetric 6x6 matrix.
        t: Elapsed time in units of 1/kappa.
    """

    u: np.ndarray
    t: float = 0.0

    def __post_init__(self) -> None:
        self.u = np.asarray(self.u, dtype=float)
        if self.u.shape != (6, 6):
            raise ValueError(f"Extended covariance must be 6x6, got {self.u.shape}")


@dataclass
class BipartiteCovariance:
    """The 4x4 covariance matrix over (X_m, Y_m, X_out, Y_out).

    Attributes:
        v: Symmetric 4x4 matrix.
    """

    v: np.ndarray = field(default_factory=lambda: np.eye(4))

    def __post_init__(self) -> None:
        self.v = np.asarray(self.v, dtype=float)
        if self.v.shape != (4, 4):
            raise ValueError(f"Bipartite covariance must be 4x4, got {self.v.shape}")
