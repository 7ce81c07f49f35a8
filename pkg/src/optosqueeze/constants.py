"""Shared constants for optosqueeze.

Default system parameters, optimization bounds, solver tolerances and the
phase schedules used by the experiment harness. All rates are expressed in
units of the optical linewidth (kappa = 1) and all times in units of 1/kappa.
"""

# --- System parameters ---
KAPPA = 1.0
MECHANICAL_DAMPING = 2.8e-10
MECHANICAL_FREQUENCY = 2.0
BATH_OCCUPATION = 2.26e8
INITIAL_OCCUPATION = 2.26e8
SHOT_NOISE_VARIANCE = 1.0

# Occupations used where the thermal equilibrium start is numerically fragile
COOLED_OCCUPATION = 100.0
HOT_BATH_OCCUPATION = 1.0e4

# --- Pulse parameters ---
COUPLING_DEFAULT = 0.1
COUPLING_BOUNDS = (0.01, 2.0)
DURATION_BOUNDS = (1.0, 100.0)
GAIN_LIMIT = 50.0
GAIN_PROPORTION_BOUNDS = (0.05, 1.0)
FOUT_KNOT_BOUNDS = (-1.0, 1.0)
N_TIMESLOTS = 5

# --- Numerics ---
RTOL = 1e-10
ATOL = 1e-20
ATOL_SCALE = 1e-16
OVERFLOW_GUARD = 1e250
FOUT_GRID_POINTS = 2048
SYMMETRY_TOLERANCE = 1e-8

# --- Control noise ---
CONTROL_NOISE_SIGMA = 0.1
NOISE_TRUNCATION = 3.0
NOISE_RESAMPLES = 2000

# --- Bayesian optimization ---
LCB_BETA = 0.5
TRUST_REGION_FRACTION = 0.1
CANDIDATE_POOL_SIZE = 2000
MAX_JITTER = 1e-4

# --- Detection ---
DETECTION_GRID = 12
LANDSCAPE_GRID = 64
TRAPPED_TOLERANCE = 1e-6

# --- Persistence ---
SCHEMA_VERSION = "1.0"

# Phase schedules (n_initial, n_explore, n_exploit) keyed by layout kind
SCHEDULES: dict[str, tuple[int, int, int]] = {
    "const_coupling": (40, 40, 20),
    "const_coupling_detuning": (40, 40, 20),
    "pwl_coupling_fout": (200, 200, 80),
    "fout_only": (120, 120, 50),
    "pwl_all": (300, 300, 100),
    "detection_angles": (40, 40, 20),
}

__all__ = [
    "KAPPA",
    "MECHANICAL_DAMPING",
    "MECHANICAL_FREQUENCY",
    "BATH_OCCUPATION",
    "INITIAL_OCCUPATION",
    "SHOT_NOISE_VARIANCE",
    "COOLED_OCCUPATION",
    "HOT_BATH_OCCUPATION",
    "COUPLING_DEFAULT",
    "COUPLING_BOUNDS",
    "DURATION_BOUNDS",
    "GAIN_LIMIT",
    "GAIN_PROPORTION_BOUNDS",
    "FOUT_KNOT_BOUNDS",
    "N_TIMESLOTS",
    "RTOL",
    "ATOL",
    "ATOL_SCALE",
    "OVERFLOW_GUARD",
    "FOUT_GRID_POINTS",
    "SYMMETRY_TOLERANCE",
    "CONTROL_NOISE_SIGMA",
    "NOISE_TRUNCATION",
    "NOISE_RESAMPLES",
    "LCB_BETA",
    "TRUST_REGION_FRACTION",
    "CANDIDATE_POOL_SIZE",
    "MAX_JITTER",
    "DETECTION_GRID",
    "LANDSCAPE_GRID",
    "TRAPPED_TOLERANCE",
    "SCHEMA_VERSION",
    "SCHEDULES",
]
