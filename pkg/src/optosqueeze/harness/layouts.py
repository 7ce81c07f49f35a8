"""Variable layouts: how an optimization vector maps to a pulse.

Every layout owns a box of bounds and a decode map from vectors in that box
to a PulseConfig (or to detection angles). Layouts that include the
coupling choose the gain proportion p instead of the duration; the duration
then follows from the gain target, so no decoded pulse can exceed the gain
limit.

Vector order per kind (n = knots per profile):

    const_coupling           g, p
    const_coupling_detuning  g, p, delta
    fout_only                f_1..f_n            (g and tau held fixed)
    pwl_coupling_fout        g_1..g_n, p, f_1..f_n
    pwl_all                  g_1..g_n, p, f_1..f_n, delta_1..delta_n
    detection_angles         theta_c, theta_m    (phi eliminated)
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from optosqueeze import constants
from optosqueeze.dynamics import (
    BipartiteCovariance,
    SystemParams,
    optimal_fout_constant,
)
from optosqueeze.exceptions import ConfigError
from optosqueeze.harness.types import LAYOUT_KINDS
from optosqueeze.pulses import (
    PiecewiseLinearProfile,
    PulseConfig,
    detection_profile,
    duration_from_gain,
    mean_square,
)
from optosqueeze.squeezing import DetectionAngles, optimal_phi

logger = logging.getLogger(__name__)

# Relative slack before the gain-safety rescaling kicks in
GAIN_SLACK = 1e-12


def default_detuning_bounds(params: SystemParams) -> tuple[float, float]:
    """Open interval (-omega_m / 2, omega_m / 2), shrunk by one ulp."""
    half = 0.5 * params.omega_m
    return float(np.nextafter(-half, 0.0)), float(np.nextafter(half, 0.0))


@dataclass(frozen=True)
class LayoutBounds:
    """Bounds of every optimizable quantity.

    Attributes:
        coupling: Bounds of each coupling value.
        gain_proportion: Bounds of the gain proportion p.
        fout: Bounds of each raw output-weighting knot.
        detuning: Bounds of each detuning offset; None for +/- omega_m / 2.
        duration: Clamp interval of the derived duration.
    """

    coupling: tuple[float, float] = constants.COUPLING_BOUNDS
    gain_proportion: tuple[float, float] = constants.GAIN_PROPORTION_BOUNDS
    fout: tuple[float, float] = constants.FOUT_KNOT_BOUNDS
    detuning: tuple[float, float] | None = None
    duration: tuple[float, float] = constants.DURATION_BOUNDS


@dataclass
class VariableLayout:
    """Decode and encode map between vectors and pulses for one layout kind.

    Attributes:
        kind: One of LAYOUT_KINDS.
        params: System parameters (detuning bounds, matched output weighting).
        bounds_config: Bounds of the individual quantities.
        n_knots: Knots per piecewise-linear profile.
        gain_limit: Amplitude-gain ceiling.
        fixed_g: Coupling held fixed by fout_only.
        fixed_tau: Duration held fixed by fout_only.
        target: Covariance whose detection angles detection_angles optimizes.
        fout_grid_points: Grid size of the matched output weighting.
    """

    kind: str
    params: SystemParams = field(default_factory=SystemParams)
    bounds_config: LayoutBounds = field(default_factory=LayoutBounds)
    n_knots: int = constants.N_TIMESLOTS + 1
    gain_limit: float = constants.GAIN_LIMIT
    fixed_g: float | None = None
    fixed_tau: float | None = None
    target: BipartiteCovariance | None = None
    fout_grid_points: int = constants.FOUT_GRID_POINTS

    def __post_init__(self) -> None:
        if self.kind not in LAYOUT_KINDS:
            raise ConfigError(f"Unknown layout kind: {self.kind}")
        if self.n_knots < 2:
            raise ConfigError(f"n_knots must be at least 2, got {self.n_knots}")
        missing_fixed = self.fixed_g is None or self.fixed_tau is None
        if self.kind == "fout_only" and missing_fixed:
            raise ConfigError("fout_only needs fixed_g and fixed_tau")
        if self.kind == "detection_angles" and self.target is None:
            raise ConfigError("detection_angles needs a target covariance")

    # --- Vector structure ---

    @property
    def slices(self) -> dict[str, slice]:
        """Vector slice of every quantity, in vector order."""
        n = self.n_knots
        if self.kind == "const_coupling":
            return {"coupling": slice(0, 1), "gain_proportion": slice(1, 2)}
        if self.kind == "const_coupling_detuning":
            return {
                "coupling": slice(0, 1),
                "gain_proportion": slice(1, 2),
                "detuning": slice(2, 3),
            }
        if self.kind == "fout_only":
            return {"fout": slice(0, n)}
        if self.kind == "detection_angles":
            return {"theta": slice(0, 2)}
        layout = {
            "coupling": slice(0, n),
            "gain_proportion": slice(n, n + 1),
            "fout": slice(n + 1, 2 * n + 1),
        }
        if self.kind == "pwl_all":
            layout["detuning"] = slice(2 * n + 1, 3 * n + 1)
        return layout

    @property
    def dims(self) -> int:
        return max(s.stop for s in self.slices.values())

    @property
    def is_constant(self) -> bool:
        """Whether the decoded coupling is a single constant value."""
        return self.kind in ("const_coupling", "const_coupling_detuning", "fout_only")

    @property
    def bounds(self) -> np.ndarray:
        """dims x 2 array of (lo, hi) pairs."""
        per_quantity = {
            "coupling": self.bounds_config.coupling,
            "gain_proportion": self.bounds_config.gain_proportion,
            "fout": self.bounds_config.fout,
            "detuning": (
                self.bounds_config.detuning or default_detuning_bounds(self.params)
            ),
            "theta": (0.0, math.pi),
        }
        rows = np.empty((self.dims, 2))
        for name, s in self.slices.items():
            rows[s] = per_quantity[name]
        return rows

    def contains(self, vector: np.ndarray) -> bool:
        b = self.bounds
        v = np.asarray(vector, dtype=float)
        return bool(np.all(v >= b[:, 0]) and np.all(v <= b[:, 1]))

    # --- Decode ---

    def _split(self, vector: np.ndarray | list[float]) -> dict[str, np.ndarray]:
        v = np.asarray(vector, dtype=float)
        if v.shape != (self.dims,):
            raise ValueError(
                f"{self.kind} expects {self.dims} values, got shape {v.shape}"
            )
        return {name: v[s] for name, s in self.slices.items()}

    def gain_safe_coupling(
        self, knots: np.ndarray, p_gain: float
    ) -> tuple[PiecewiseLinearProfile, float]:
        """Duration for a coupling shape and the (possibly rescaled) coupling.

        The duration follows from the root-mean-square coupling. When the
        duration clamps at its lower bound and the gain would still exceed
        the target, the knots are scaled down until the gain equals it.

        Returns:
            (coupling profile on [0, tau], tau).
        """
        tau_min, tau_max = self.bounds_config.duration
        shape = PiecewiseLinearProfile(knots=tuple(knots), tau=1.0)
        ms = mean_square(shape)
        if not ms > 0:
            return shape.with_tau(tau_max), tau_max

        kappa = self.params.kappa
        tau = duration_from_gain(
            math.sqrt(ms), p_gain, self.gain_limit, tau_max, tau_min, kappa
        )
        exponent = 2.0 * ms * tau / kappa
        allowed = math.log(max(p_gain * self.gain_limit, 1.0))
        if exponent > allowed + GAIN_SLACK * max(1.0, allowed):
            scale = math.sqrt(allowed / exponent)
            logger.debug(f"Coupling rescaled by {scale:.6g} at tau={tau:.6g}")
            shape = shape.scaled(scale)
        return shape.with_tau(tau), tau

    def decode(self, vector: np.ndarray | list[float]) -> PulseConfig | DetectionAngles:
        """Map a vector to its pulse, or to detection angles."""
        parts = self._split(vector)

        if self.kind == "detection_angles":
            theta_c, theta_m = parts["theta"]
            phi, _ = optimal_phi(self.target, float(theta_c), float(theta_m))
            return DetectionAngles.wrapped(theta_c, theta_m, phi)

        if self.kind == "fout_only":
            tau = float(self.fixed_tau)
            return PulseConfig.constant(
                float(self.fixed_g),
                tau,
                fout=PiecewiseLinearProfile(knots=tuple(parts["fout"]), tau=tau),
                gain_limit=self.gain_limit,
            )

        p_gain = float(parts["gain_proportion"][0])
        knots = parts["coupling"]
        if self.is_constant:
            knots = np.repeat(knots, 2)
        coupling, tau = self.gain_safe_coupling(knots, p_gain)

        if "detuning" in parts:
            offsets = parts["detuning"]
            if self.is_constant:
                offsets = np.repeat(offsets, 2)
            detuning = PiecewiseLinearProfile(knots=tuple(offsets), tau=tau)
        else:
            detuning = PiecewiseLinearProfile.constant(0.0, tau)

        if self.is_constant:
            fout = optimal_fout_constant(
                self.params, coupling.knots[0], tau, self.fout_grid_points
            )
            normalized = True
        else:
            fout = PiecewiseLinearProfile(knots=tuple(parts["fout"]), tau=tau)
            normalized = False

        return PulseConfig(
            coupling=coupling,
            detuning_offset=detuning,
            fout=fout,
            fout_is_normalized=normalized,
            gain_limit=self.gain_limit,
            gain_proportion=p_gain,
        )

    # --- Encode ---

    def encode(self, config: PulseConfig | DetectionAngles) -> np.ndarray:
        """Inverse of decode for configurations decode can produce."""
        if self.kind == "detection_angles":
            if not isinstance(config, DetectionAngles):
                raise TypeError("detection_angles encodes DetectionAngles")
            return np.array([config.theta_c, config.theta_m])
        if not isinstance(config, PulseConfig):
            raise TypeError(f"{self.kind} encodes PulseConfig")

        if self.kind == "fout_only":
            return self._checked_knots(config.fout)
        if self.is_constant:
            parts = [config.coupling.knots[0], config.gain_proportion]
            if self.kind == "const_coupling_detuning":
                parts.append(config.detuning_offset.knots[0])
            return np.array(parts, dtype=float)

        parts = [
            self._checked_knots(config.coupling),
            [config.gain_proportion],
            self._checked_knots(config.fout),
        ]
        if self.kind == "pwl_all":
            parts.append(self._checked_knots(config.detuning_offset))
        return np.concatenate(parts)

    def _checked_knots(self, profile: PiecewiseLinearProfile) -> np.ndarray:
        if len(profile.knots) != self.n_knots:
            raise ValueError(
                f"{self.kind} expects {self.n_knots} knots, got {len(profile.knots)}"
            )
        return profile.values

    def profile_knots(self, pulse: PulseConfig) -> dict[str, list[float]]:
        """Optimized profiles of a decoded pulse, output weighting normalized."""
        knots: dict[str, list[float]] = {}
        if self.kind != "fout_only":
            coupling = pulse.coupling.knots
            knots["coupling"] = list(coupling[:1] if self.is_constant else coupling)
        if not self.is_constant or self.kind == "fout_only":
            knots["fout"] = list(detection_profile(pulse).knots)
        if self.kind == "const_coupling_detuning":
            knots["detuning"] = [pulse.detuning_offset.knots[0]]
        elif self.kind == "pwl_all":
            knots["detuning"] = list(pulse.detuning_offset.knots)
        return knots


def make_layout(
    kind: str,
    params: SystemParams,
    *,
    bounds: LayoutBounds | None = None,
    n_knots: int = constants.N_TIMESLOTS + 1,
    gain_limit: float = constants.GAIN_LIMIT,
    fixed_g: float | None = None,
    fixed_tau: float | None = None,
    target: BipartiteCovariance | None = None,
    fout_grid_points: int = constants.FOUT_GRID_POINTS,
) -> VariableLayout:
    """Build a layout, validating kind-specific requirements.

    Raises:
        ConfigError: If the kind is unknown or a required input is missing.
    """
    layout = VariableLayout(
        kind=kind,
        params=params,
        bounds_config=bounds or LayoutBounds(),
        n_knots=n_knots,
        gain_limit=gain_limit,
        fixed_g=fixed_g,
        fixed_tau=fixed_tau,
        target=target,
        fout_grid_points=fout_grid_points,
    )
    logger.debug(f"Layout {kind} with {layout.dims} dimensions")
    return layout
