"""Self-contained Gaussian-process Bayesian optimization.

This package provides the GP surrogate, the EI and LCB acquisitions, the
Latin-hypercube initial design, the three-phase optimization loop and a
gradient-based baseline.
"""

from optosqueeze.bayesopt.acquisition import (
    Acquisition,
    acquisition_ei,
    acquisition_lcb,
    make_acquisition,
)
from optosqueeze.bayesopt.design import initial_design
from optosqueeze.bayesopt.gp import gp_fit, gp_posterior, matern52
from optosqueeze.bayesopt.gradient import run_lbfgsb
from optosqueeze.bayesopt.optimizer import propose_next, run_bo
from optosqueeze.bayesopt.types import (
    BoConfig,
    BoResult,
    GpConfig,
    GpSurrogate,
    OptimizationProblem,
    PhaseSchedule,
)

__all__ = [
    # Types
    "GpConfig",
    "GpSurrogate",
    "PhaseSchedule",
    "OptimizationProblem",
    "BoConfig",
    "BoResult",
    # Surrogate
    "matern52",
    "gp_fit",
    "gp_posterior",
    # Acquisition
    "Acquisition",
    "acquisition_ei",
    "acquisition_lcb",
    "make_acquisition",
    # Loop
    "initial_design",
    "propose_next",
    "run_bo",
    "run_lbfgsb",
]
