"""Covariance dynamics for optosqueeze.

This package builds the drift and diffusion matrices of the linearized
optomechanical system and propagates the extended covariance matrix, either
numerically without the rotating-wave approximation or analytically in the
envelope frame for constant pulses.
"""

from optosqueeze.dynamics.covariance import (
    extract_bipartite,
    initial_covariance,
    is_physical,
    symmetrize,
    symplectic_eigenvalues,
)
from optosqueeze.dynamics.integrator import (
    SolverOptions,
    integrate_covariance,
    integrate_lyapunov,
)
from optosqueeze.dynamics.matrices import (
    build_drift_A,
    build_extended_B,
    build_extended_F,
    lo_rotation,
)
from optosqueeze.dynamics.rwa import (
    adiabatic_gain,
    integrate_rwa_envelope,
    optimal_fout_constant,
    rwa_covariance_constant,
    rwa_envelope_matrices,
)
from optosqueeze.dynamics.types import (
    BipartiteCovariance,
    ExtendedCovariance,
    SystemParams,
)

__all__ = [
    # Types
    "SystemParams",
    "ExtendedCovariance",
    "BipartiteCovariance",
    "SolverOptions",
    # Matrices
    "build_drift_A",
    "build_extended_B",
    "build_extended_F",
    "lo_rotation",
    # Covariance helpers
    "initial_covariance",
    "extract_bipartite",
    "symmetrize",
    "symplectic_eigenvalues",
    "is_physical",
    # Numerical propagation
    "integrate_lyapunov",
    "integrate_covariance",
    # Envelope frame
    "rwa_envelope_matrices",
    "rwa_covariance_constant",
    "integrate_rwa_envelope",
    "optimal_fout_constant",
    "adiabatic_gain",
]
