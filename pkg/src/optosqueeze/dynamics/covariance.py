"""Covariance-matrix helpers: initial state, reduction and physicality."""

import numpy as np

from optosqueeze.dynamics.types import (
    BipartiteCovariance,
    ExtendedCovariance,
    SystemParams,
)


def initial_covariance(params: SystemParams) -> ExtendedCovariance:
    """Cavity vacuum, thermal mechanics at n_0 and an empty output accumulator."""
    thermal = 2.0 * params.n_0 + 1.0
    return ExtendedCovariance(u=np.diag([1.0, 1.0, thermal, thermal, 0.0, 0.0]), t=0.0)


def extract_bipartite(u: ExtendedCovariance) -> BipartiteCovariance:
    """Keep the mechanics and output-mode rows and columns."""
    return BipartiteCovariance(v=u.u[2:, 2:].copy())


def symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form for (X, Y) ordered quadrature pairs."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(cm: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of a covariance matrix, ascending.

    With [X, Y] = 2i the vacuum has symplectic eigenvalue 1 and a physical
    state has every symplectic eigenvalue at least 1.
    """
    n_modes = cm.shape[0] // 2
    eigs = np.abs(np.linalg.eigvals(1j * symplectic_form(n_modes) @ cm))
    # Eigenvalues come in +/- pairs; keep one of each
    return np.sort(eigs)[::2]


def is_physical(cm: np.ndarray, tolerance: float = 1e-8) -> bool:
    """Whether all symplectic eigenvalues are at least 1 - tolerance."""
    return bool(np.all(symplectic_eigenvalues(cm) >= 1.0 - tolerance))
