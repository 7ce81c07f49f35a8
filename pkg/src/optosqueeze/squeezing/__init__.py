"""Squeezing metrics and detection for optosqueeze.

This package computes the minimal eigenvalue and generalized two-mode
squeezing of a bipartite covariance, the variance of the generalized
quadrature, and searches over detection angles.
"""

from optosqueeze.squeezing.detection import angle_landscape, detect_min_variance
from optosqueeze.squeezing.metrics import (
    generalized_squeezing,
    min_eigenvalue,
    newton_phi,
    optimal_phi,
    phi_derivatives,
    rotated_components,
    signed_squeezing,
    var_xgen,
)
from optosqueeze.squeezing.types import (
    AngleLandscape,
    DetectionAngles,
    DetectionResult,
    DetectionStrategy,
)

__all__ = [
    # Types
    "DetectionAngles",
    "DetectionStrategy",
    "DetectionResult",
    "AngleLandscape",
    # Metrics
    "min_eigenvalue",
    "generalized_squeezing",
    "signed_squeezing",
    "var_xgen",
    "rotated_components",
    "optimal_phi",
    "newton_phi",
    "phi_derivatives",
    # Detection
    "detect_min_variance",
    "angle_landscape",
]
