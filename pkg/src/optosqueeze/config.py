"""Configuration module for optosqueeze using pydantic-settings."""

from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict

from optosqueeze import constants


class OptoSqueezeSettings(BaseSettings):
    """Process-level settings for optosqueeze.

    All settings can be overridden via environment variables with the
    OPTOSQUEEZE_ prefix. For example, OPTOSQUEEZE_OUT_DIR overrides the
    default output directory and OPTOSQUEEZE_WORKERS the process pool size.
    Experiment-specific choices (layout, schedule, seeds) live in the
    experiment configuration file instead.
    """

    # Output directories (runs_dir is relative to out_dir)
    out_dir: str = "."
    runs_dir: str = "runs"

    # Logging
    log_level: str = "INFO"

    # Parallel repeats and sweep points
    workers: int = 1

    # Persist wall time in records (breaks byte-identical re-runs)
    record_timing: bool = False

    # Integrator
    rtol: float = constants.RTOL
    atol: float = constants.ATOL
    atol_scale: float = constants.ATOL_SCALE
    overflow_guard: float = constants.OVERFLOW_GUARD
    fout_grid_points: int = constants.FOUT_GRID_POINTS

    model_config = SettingsConfigDict(env_prefix="OPTOSQUEEZE_")

    # --- Resolved paths ---

    @property
    def resolved_out_dir(self) -> Path:
        """Get the full path to the output directory."""
        return Path(self.out_dir)

    @property
    def resolved_runs_dir(self) -> Path:
        """Get the full path to the run-record directory."""
        return Path(self.out_dir) / self.runs_dir
