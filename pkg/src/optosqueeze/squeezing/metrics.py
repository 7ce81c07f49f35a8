"""Squeezing metrics of a bipartite covariance matrix.

The generalized quadrature mixes the rotated quadratures of both modes:
X_gen = cos(phi) X1(theta_c) + sin(phi) X2(theta_m). Its variance is a
sinusoid in 2 phi, so the optimal mixing angle and the minimal variance have
closed forms; a Newton iteration on the same function is kept as a check.
"""

import math

import numpy as np
from scipy.optimize import minimize

from optosqueeze import constants
from optosqueeze.dynamics import BipartiteCovariance
from optosqueeze.exceptions import NonPositiveEigenvalue, NotSymmetric
from optosqueeze.squeezing.types import DetectionAngles


def _checked(v: BipartiteCovariance) -> np.ndarray:
    m = v.v
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.T)) > constants.SYMMETRY_TOLERANCE * scale:
        raise NotSymmetric(f"Covariance asymmetry {np.max(np.abs(m - m.T)):.3g}")
    return m


def min_eigenvalue(v: BipartiteCovariance) -> float:
    """Smallest eigenvalue of a symmetric 4x4 covariance.

    Raises:
        NotSymmetric: If the asymmetry exceeds the tolerance.
    """
    return float(np.linalg.eigvalsh(_checked(v))[0])


def signed_squeezing(lambda_min: float) -> float:
    """-10 log10(lambda_min) in dB, negative for lambda_min > 1.

    Raises:
        NonPositiveEigenvalue: If lambda_min <= 0.
    """
    if not lambda_min > 0:
        raise NonPositiveEigenvalue(f"lambda_min must be positive, got {lambda_min}")
    return -10.0 * math.log10(lambda_min)


def generalized_squeezing(lambda_min: float) -> float:
    """Two-mode squeezing max(0, -10 log10(lambda_min)) in dB."""
    return max(0.0, signed_squeezing(lambda_min))


def rotated_components(
    v: np.ndarray, theta_c: np.ndarray | float, theta_m: np.ndarray | float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Entries (1,1), (3,3) and (1,3) of R V R^T, vectorized over the angles."""
    theta_c = np.asarray(theta_c, dtype=float)
    theta_m = np.asarray(theta_m, dtype=float)
    rc = np.stack([np.cos(theta_c), np.sin(theta_c)], axis=-1)
    rm = np.stack([np.cos(theta_m), np.sin(theta_m)], axis=-1)
    a = np.einsum("...i,ij,...j->...", rc, v[:2, :2], rc)
    b = np.einsum("...i,ij,...j->...", rm, v[2:, 2:], rm)
    c = np.einsum("...i,ij,...j->...", rc, v[:2, 2:], rm)
    return a, b, c


def var_xgen(v: BipartiteCovariance, angles: DetectionAngles) -> float:
    """Variance of the generalized quadrature at the given angles."""
    a, b, c = rotated_components(_checked(v), angles.theta_c, angles.theta_m)
    phi = angles.phi
    cos, sin = math.cos(phi), math.sin(phi)
    return float(a * cos**2 + b * sin**2 + c * math.sin(2 * phi))


def phi_derivatives(
    v: BipartiteCovariance, theta_c: float, theta_m: float, phi: float
) -> tuple[float, float]:
    """First and second derivative of var_xgen with respect to phi."""
    a, b, c = rotated_components(_checked(v), theta_c, theta_m)
    first = (b - a) * math.sin(2 * phi) + 2 * c * math.cos(2 * phi)
    second = 2 * (b - a) * math.cos(2 * phi) - 4 * c * math.sin(2 * phi)
    return float(first), float(second)


def optimal_phi(
    v: BipartiteCovariance, theta_c: float, theta_m: float
) -> tuple[float, float]:
    """Mixing angle minimizing the generalized-quadrature variance.

    Args:
        v: Bipartite covariance.
        theta_c: First rotation angle.
        theta_m: Second rotation angle.

    Returns:
        (phi, variance) with phi = atan2(-2 c, b - a) / 2 in [-pi/2, pi/2];
        a degenerate (flat) variance returns phi = 0.
    """
    a, b, c = rotated_components(_checked(v), theta_c, theta_m)
    a, b, c = float(a), float(b), float(c)
    phi = 0.5 * math.atan2(-2.0 * c, b - a)
    variance = 0.5 * (a + b) - math.hypot(0.5 * (a - b), c)
    return phi, variance


def newton_phi(
    v: BipartiteCovariance, theta_c: float, theta_m: float, phi0: float = 0.0
) -> tuple[float, float]:
    """Minimize over phi with Newton-CG using the analytic derivatives.

    Returns:
        (phi, variance), phi wrapped to [-pi/2, pi/2].
    """

    def variance(x: np.ndarray) -> float:
        return var_xgen(v, DetectionAngles.wrapped(theta_c, theta_m, _wrap_phi(x[0])))

    def jac(x: np.ndarray) -> np.ndarray:
        return np.array([phi_derivatives(v, theta_c, theta_m, x[0])[0]])

    def hess(x: np.ndarray) -> np.ndarray:
        return np.array([[phi_derivatives(v, theta_c, theta_m, x[0])[1]]])

    result = minimize(
        variance, np.array([phi0]), jac=jac, hess=hess, method="Newton-CG"
    )
    phi = _wrap_phi(float(result.x[0]))
    return phi, float(result.fun)


def _wrap_phi(phi: float) -> float:
    """Map phi onto [-pi/2, pi/2]; var_xgen has period pi in phi."""
    return (phi + math.pi / 2) % math.pi - math.pi / 2
