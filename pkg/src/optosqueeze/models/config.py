"""Pydantic models for experiment configuration files.

An experiment is described by one JSON document. Every section rejects
unknown keys, and the whole document is validated before any run starts.
Dotted `key=value` overrides from the command line are applied to the raw
document before validation.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field

from optosqueeze import constants
from optosqueeze.bayesopt import BoConfig, GpConfig, PhaseSchedule
from optosqueeze.dynamics import SolverOptions, SystemParams, optimal_fout_constant
from optosqueeze.exceptions import ConfigError
from optosqueeze.harness import LayoutBounds
from optosqueeze.pulses import (
    PiecewiseLinearProfile,
    PulseConfig,
    duration_from_gain,
    effective_gain,
    normalize_fout,
)
from optosqueeze.squeezing import DetectionStrategy

logger = logging.getLogger(__name__)

LayoutKind = Literal[
    "const_coupling",
    "const_coupling_detuning",
    "fout_only",
    "pwl_coupling_fout",
    "pwl_all",
    "detection_angles",
]

Interval = tuple[float, float]

# Relative slack on the gain limit for pulses sized exactly to it
GAIN_SLACK = 1e-9


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SystemConfig(_Section):
    """Physical parameters, all rates in units of kappa."""

    kappa: float = Field(constants.KAPPA, gt=0, description="Optical linewidth")
    gamma: float = Field(
        constants.MECHANICAL_DAMPING, ge=0, description="Mechanical damping"
    )
    omega_m: float = Field(
        constants.MECHANICAL_FREQUENCY, gt=0, description="Mechanical frequency"
    )
    n_th: float = Field(constants.BATH_OCCUPATION, ge=0, description="Bath occupation")
    n_0: float = Field(
        constants.INITIAL_OCCUPATION, ge=0, description="Initial occupation"
    )
    gamma_heat: float | None = Field(
        None, ge=0, description="Heating rate; sets n_th = gamma_heat / gamma when given"
    )

    def to_params(self) -> SystemParams:
        """Build SystemParams.

        Raises:
            ConfigError: If gamma_heat is set while gamma is zero.
        """
        params = SystemParams(
            kappa=self.kappa,
            gamma=self.gamma,
            omega_m=self.omega_m,
            n_th=self.n_th,
            n_0=self.n_0,
        )
        if self.gamma_heat is not None:
            if self.gamma == 0:
                raise ConfigError("gamma_heat needs a positive gamma")
            params = params.with_heating_rate(self.gamma_heat)
        return params


class ScheduleConfig(_Section):
    """Evaluations per phase; unset values use the layout's default."""

    n_initial: int | None = Field(None, ge=1)
    n_explore: int | None = Field(None, ge=1)
    n_exploit: int | None = Field(None, ge=1)


class PulseSpec(_Section):
    """An explicit pulse for simulate, detect and landscape.

    A constant pulse needs only g; its duration follows from the gain
    proportion unless tau is given, and its output weighting is the matched
    profile unless fout_knots is given. A piecewise-linear pulse gives
    coupling_knots and an explicit tau.
    """

    g: float = Field(constants.COUPLING_DEFAULT, ge=0, description="Constant coupling")
    tau: float | None = Field(None, gt=0, description="Pulse duration")
    gain_proportion: float = Field(
        1.0, gt=0, le=1, description="Fraction of the gain limit"
    )
    delta: float = Field(0.0, description="Constant detuning offset")
    coupling_knots: list[float] | None = Field(None, min_length=2)
    fout_knots: list[float] | None = Field(None, min_length=2)
    detuning_knots: list[float] | None = Field(None, min_length=2)

    def to_pulse(
        self,
        params: SystemParams,
        gain_limit: float = constants.GAIN_LIMIT,
        duration_bounds: Interval = constants.DURATION_BOUNDS,
        fout_grid_points: int = constants.FOUT_GRID_POINTS,
    ) -> PulseConfig:
        """Build the PulseConfig.

        Raises:
            ConfigError: If a piecewise-linear pulse has no tau, the constant
                pulse has zero coupling and no tau, a profile is invalid or
                the pulse exceeds the gain limit.
        """
        try:
            pulse = self._build(params, gain_limit, duration_bounds, fout_grid_points)
        except ConfigError:
            raise
        except ValueError as e:
            raise ConfigError(f"Invalid pulse: {e}") from e

        gain = effective_gain(pulse, params.kappa)
        if gain > gain_limit * (1.0 + GAIN_SLACK):
            raise ConfigError(
                f"Pulse gain {gain:.6g} exceeds the gain limit {gain_limit:.6g}"
            )
        return pulse

    def _build(
        self,
        params: SystemParams,
        gain_limit: float,
        duration_bounds: Interval,
        fout_grid_points: int,
    ) -> PulseConfig:
        if self.coupling_knots is not None:
            if self.tau is None:
                raise ConfigError("A piecewise-linear pulse needs an explicit tau")
            tau = self.tau
            coupling = PiecewiseLinearProfile(knots=tuple(self.coupling_knots), tau=tau)
        else:
            if self.tau is not None:
                tau = self.tau
            elif self.g > 0:
                tau = duration_from_gain(
                    self.g,
                    self.gain_proportion,
                    gain_limit,
                    duration_bounds[1],
                    duration_bounds[0],
                    params.kappa,
                )
            else:
                raise ConfigError("A pulse with g = 0 needs an explicit tau")
            coupling = PiecewiseLinearProfile.constant(self.g, tau)

        if self.detuning_knots is not None:
            detuning = PiecewiseLinearProfile(knots=tuple(self.detuning_knots), tau=tau)
        else:
            detuning = PiecewiseLinearProfile.constant(self.delta, tau)

        if self.fout_knots is not None:
            fout = normalize_fout(
                PiecewiseLinearProfile(knots=tuple(self.fout_knots), tau=tau)
            )
            normalized = True
        elif coupling.is_constant:
            fout = optimal_fout_constant(
                params, coupling.knots[0], tau, fout_grid_points
            )
            normalized = True
        else:
            fout = PiecewiseLinearProfile.constant(1.0 / math.sqrt(tau), tau)
            normalized = True

        return PulseConfig(
            coupling=coupling,
            detuning_offset=detuning,
            fout=fout,
            fout_is_normalized=normalized,
            gain_limit=gain_limit,
            gain_proportion=self.gain_proportion,
        )


class BayesOptConfig(_Section):
    """Bayesian-optimization loop settings."""

    beta: float = Field(constants.LCB_BETA, ge=0)
    trust_region: float = Field(constants.TRUST_REGION_FRACTION, gt=0, le=1)
    pool_size: int = Field(constants.CANDIDATE_POOL_SIZE, ge=1)
    n_local: int = Field(200, ge=0)
    refit_every: int = Field(5, ge=1)
    n_restarts: int = Field(3, ge=1)
    noise_var: float | None = Field(None, gt=0)
    failure_fallback: float = 1.0

    def to_bo_config(self) -> BoConfig:
        return BoConfig(
            gp=GpConfig(noise_var=self.noise_var, n_restarts=self.n_restarts),
            beta=self.beta,
            trust_region=self.trust_region,
            pool_size=self.pool_size,
            n_local=self.n_local,
            refit_every=self.refit_every,
            failure_fallback=self.failure_fallback,
        )


class DetectionConfig(_Section):
    """Detection-angle search and landscape export."""

    method: Literal["grid", "lbfgsb", "bayesopt"] = "grid"
    grid_n: int = Field(constants.DETECTION_GRID, ge=2)
    refine_starts: int = Field(3, ge=1)
    trapped_tolerance: float = Field(constants.TRAPPED_TOLERANCE, gt=0)
    cooled_n0: float = Field(constants.COOLED_OCCUPATION, ge=0)
    landscape_grid: int = Field(constants.LANDSCAPE_GRID, ge=2)
    theta_max: float = Field(
        math.pi, gt=0, description="Upper end of the landscape axes"
    )

    def to_strategy(self, seed: int = 0) -> DetectionStrategy:
        return DetectionStrategy(
            method=self.method,
            grid_n=self.grid_n,
            refine_starts=self.refine_starts,
            seed=seed,
            trapped_tolerance=self.trapped_tolerance,
        )


class NoiseConfig(_Section):
    """Control-noise settings."""

    rel_sigma: float = Field(constants.CONTROL_NOISE_SIGMA, ge=0)
    truncation: float = Field(constants.NOISE_TRUNCATION, gt=0)
    n_samples: int = Field(
        constants.NOISE_RESAMPLES, ge=0, description="0 skips the study"
    )


class SweepConfig(_Section):
    """Heating-rate sweep and fixed reference pulses."""

    gamma_values: list[float] = Field(
        default_factory=lambda: [0.063, 0.28, 1.0, 2.8, 10.0, 50.0], min_length=1
    )
    n_0: float | None = Field(None, ge=0, description="None picks the stable default")
    fixed_pulses: list[Interval] = Field(
        default_factory=list, description="(g, tau) reference pulses"
    )
    scan_g: list[float] = Field(
        default_factory=list, description="Couplings of the solver comparison scan"
    )


class BoundsConfig(_Section):
    """Overrides of the optimization bounds."""

    coupling: Interval = constants.COUPLING_BOUNDS
    gain_proportion: Interval = constants.GAIN_PROPORTION_BOUNDS
    fout: Interval = constants.FOUT_KNOT_BOUNDS
    detuning: Interval | None = None
    duration: Interval = constants.DURATION_BOUNDS

    def to_layout_bounds(self) -> LayoutBounds:
        for name in ("coupling", "gain_proportion", "fout", "detuning", "duration"):
            interval = getattr(self, name)
            if interval is not None and not interval[0] < interval[1]:
                raise ConfigError(f"bounds.{name} needs lo < hi, got {interval}")
        return LayoutBounds(
            coupling=self.coupling,
            gain_proportion=self.gain_proportion,
            fout=self.fout,
            detuning=self.detuning,
            duration=self.duration,
        )


class ExperimentConfig(_Section):
    """A complete, self-describing experiment."""

    name: str = Field("experiment", min_length=1, pattern=r"^[A-Za-z0-9_.-]+$")
    layout: LayoutKind = "const_coupling"
    solver: Literal["numeric", "rwa"] = "numeric"
    optimizer: Literal["bayesopt", "lbfgsb"] = "bayesopt"
    seed: int = Field(0, ge=0)
    repeats: int = Field(1, ge=1)
    n_knots: int = Field(constants.N_TIMESLOTS + 1, ge=2)
    gain_limit: float = Field(constants.GAIN_LIMIT, gt=1)
    fixed_g: float | None = Field(None, gt=0, description="Coupling held by fout_only")
    fixed_tau: float | None = Field(
        None, gt=0, description="Duration held by fout_only"
    )
    demodulate: bool = True
    out_dir: str | None = None

    system: SystemConfig = Field(default_factory=SystemConfig)
    schedule: ScheduleConfig = Field(default_factory=ScheduleConfig)
    pulse: PulseSpec = Field(default_factory=PulseSpec)
    bayesopt: BayesOptConfig = Field(default_factory=BayesOptConfig)
    detection: DetectionConfig = Field(default_factory=DetectionConfig)
    noise: NoiseConfig = Field(default_factory=NoiseConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    bounds: BoundsConfig = Field(default_factory=BoundsConfig)

    def resolved_schedule(self) -> PhaseSchedule:
        """Phase schedule with the layout's defaults filled in."""
        default = PhaseSchedule.for_layout(self.layout)
        return PhaseSchedule(
            self.schedule.n_initial or default.n_initial,
            self.schedule.n_explore or default.n_explore,
            self.schedule.n_exploit or default.n_exploit,
        )

    def solver_options(
        self,
        rtol: float = constants.RTOL,
        atol: float = constants.ATOL,
        atol_scale: float = constants.ATOL_SCALE,
        overflow_guard: float = constants.OVERFLOW_GUARD,
        fout_grid_points: int = constants.FOUT_GRID_POINTS,
    ) -> SolverOptions:
        return SolverOptions(
            rtol=rtol,
            atol=atol,
            atol_scale=atol_scale,
            overflow_guard=overflow_guard,
            demodulate=self.demodulate,
            fout_grid_points=fout_grid_points,
        )


def apply_overrides(data: dict[str, Any], overrides: list[str]) -> dict[str, Any]:
    """Patch a raw config document with dotted key=value overrides.

    Values are parsed as JSON and fall back to plain strings, so
    `system.gamma_heat=2.8`, `layout=pwl_all` and `sweep.gamma_values=[1,2]`
    all work.

    Raises:
        ConfigError: If an override is malformed or descends into a scalar.
    """
    for item in overrides:
        key, sep, raw = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"Override must look like key=value, got '{item}'")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw

        node = data
        parts = key.strip().split(".")
        for part in parts[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError(
                    f"Override '{key}' descends into non-section '{part}'"
                )
            node = child
        node[parts[-1]] = value
        logger.debug(f"Override {key} = {value!r}")
    return data


def load_config(
    path: Path | None = None, overrides: list[str] | None = None
) -> ExperimentConfig:
    """Read, patch and validate an experiment configuration.

    Args:
        path: JSON file, or None for the defaults.
        overrides: Dotted key=value patches.

    Returns:
        The validated configuration.

    Raises:
        ConfigError: If the file is missing or not a JSON object.
        pydantic.ValidationError: If the document fails validation.
    """
    data: dict[str, Any] = {}
    if path is not None:
        if not path.exists():
            raise ConfigError(f"Config file {path} not found")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {path} must contain a JSON object")
    data = apply_overrides(data, overrides or [])
    return ExperimentConfig.model_validate(data)
