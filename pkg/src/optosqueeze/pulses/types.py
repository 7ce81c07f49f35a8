"""Data types for pulse profiles.

This module defines the piecewise-linear control profile shared by the
coupling, detuning-offset and output-mode weighting, and the pulse
configuration that bundles them with the amplitude-gain constraint.
"""

from dataclasses import dataclass, replace

import numpy as np

from optosqueeze import constants
from optosqueeze.exceptions import NonPositiveArgument


@dataclass(frozen=True)
class PiecewiseLinearProfile:
    """A continuous piecewise-linear profile on [0, tau].

    Knots sit at equally spaced times, so a profile with N+1 knots has N
    timeslots of duration tau / N.

    Attributes:
        knots: Profile values at the slot boundaries.
        tau: Total duration in units of 1/kappa.
    """

    knots: tuple[float, ...]
    tau: float

    def __post_init__(self) -> None:
        """Coerce knots to floats and validate the shape."""
        knots = tuple(float(k) for k in self.knots)
        if len(knots) < 2:
            raise ValueError(f"A profile needs at least 2 knots, got {len(knots)}")
        if not np.all(np.isfinite(knots)):
            raise ValueError("Profile knots must be finite")
        if not self.tau > 0:
            raise NonPositiveArgument(f"Profile duration must be positive, got {self.tau}")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "tau", float(self.tau))

    @classmethod
    def constant(cls, value: float, tau: float) -> "PiecewiseLinearProfile":
        """Create a constant profile (a single flat segment)."""
        return cls(knots=(value, value), tau=tau)

    @property
    def n_segments(self) -> int:
        """Number of timeslots."""
        return len(self.knots) - 1

    @property
    def segment_length(self) -> float:
        """Duration of one timeslot."""
        return self.tau / self.n_segments

    @property
    def times(self) -> np.ndarray:
        """Knot times."""
        return np.linspace(0.0, self.tau, len(self.knots))

    @property
    def values(self) -> np.ndarray:
        """Knot values as an array."""
        return np.asarray(self.knots, dtype=float)

    @property
    def is_constant(self) -> bool:
        return all(k == self.knots[0] for k in self.knots)

    def value_at(self, t: float | np.ndarray) -> float | np.ndarray:
        """Interpolate without a domain check; times outside [0, tau] clamp."""
        return np.interp(t, self.times, self.values)

    def scaled(self, factor: float) -> "PiecewiseLinearProfile":
        return replace(self, knots=tuple(factor * k for k in self.knots))

    def with_tau(self, tau: float) -> "PiecewiseLinearProfile":
        return replace(self, tau=tau)


@dataclass(frozen=True)
class PulseConfig:
    """Complete control description of one pulse.

    The detuning is Delta(t) = -omega_m + delta(t), i.e. the offset profile
    is added to the blue-sideband drive. The output-mode weighting is kept as
    given and normalized on use unless `fout_is_normalized` is set.

    Attributes:
        coupling: Optomechanical coupling g(t) in units of kappa.
        detuning_offset: Detuning offset delta(t) in units of kappa.
        fout: Output-mode weighting f_out(t), raw or normalized.
        fout_is_normalized: Whether fout already has unit square-integral.
        gain_limit: Amplitude-gain ceiling.
        gain_proportion: Fraction of the gain limit the pulse targets.
    """

    coupling: PiecewiseLinearProfile
    detuning_offset: PiecewiseLinearProfile
    fout: PiecewiseLinearProfile
    fout_is_normalized: bool = False
    gain_limit: float = constants.GAIN_LIMIT
    gain_proportion: float = 1.0

    def __post_init__(self) -> None:
        """Validate that all profiles share one duration."""
        taus = {self.coupling.tau, self.detuning_offset.tau, self.fout.tau}
        if len(taus) != 1:
            raise ValueError(f"All profiles must share one duration, got {sorted(taus)}")
        if not 0 < self.gain_proportion <= 1:
            raise ValueError(
                f"gain_proportion must lie in (0, 1], got {self.gain_proportion}"
            )
        if not self.gain_limit > 1:
            raise ValueError(f"gain_limit must exceed 1, got {self.gain_limit}")

    @property
    def tau(self) -> float:
        """Shared pulse duration."""
        return self.coupling.tau

    @classmethod
    def constant(
        cls,
        g: float,
        tau: float,
        fout: PiecewiseLinearProfile | None = None,
        delta: float = 0.0,
        gain_limit: float = constants.GAIN_LIMIT,
        gain_proportion: float = 1.0,
    ) -> "PulseConfig":
        """Build a top-hat pulse.

        Args:
            g: Constant coupling.
            tau: Pulse duration.
            fout: Output weighting; defaults to the flat profile 1/sqrt(tau).
            delta: Constant detuning offset.
            gain_limit: Amplitude-gain ceiling.
            gain_proportion: Targeted fraction of the gain limit.

        Returns:
            The pulse configuration.
        """
        if fout is None:
            fout = PiecewiseLinearProfile.constant(1.0 / np.sqrt(tau), tau)
        return cls(
            coupling=PiecewiseLinearProfile.constant(g, tau),
            detuning_offset=PiecewiseLinearProfile.constant(delta, tau),
            fout=fout,
            fout_is_normalized=False,
            gain_limit=gain_limit,
            gain_proportion=gain_proportion,
        )

    def with_coupling(self, coupling: PiecewiseLinearProfile) -> "PulseConfig":
        return replace(self, coupling=coupling)
