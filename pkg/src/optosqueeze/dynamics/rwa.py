"""Analytic solver in the rotating-wave envelope frame.

On resonant blue-sideband driving the envelope quadratures obey a
time-independent linear system, so the covariance of the mechanics and the
detected output mode follows from matrix exponentials alone:

    V = G0 V0 G0^T + integral over s of H(s) D H(s)^T

where G0 maps the initial state to (mechanics at tau, output mode) and H(s)
maps the noise injected at time s. The output-mode kernel
W(s) = integral over [s, tau] of f(t) exp(A (t - s)) dt is built by a
backward recursion over equal panels of the piecewise-linear weighting, and
the noise integral uses Gauss-Legendre quadrature on each panel.
"""

import logging
import math

import numpy as np
from scipy.linalg import expm

from optosqueeze import constants
from optosqueeze.dynamics.covariance import symmetrize
from optosqueeze.dynamics.integrator import SolverOptions, integrate_lyapunov
from optosqueeze.dynamics.types import BipartiteCovariance, SystemParams
from optosqueeze.exceptions import GainOverflow, NonPositiveArgument
from optosqueeze.pulses import PiecewiseLinearProfile, normalize_fout

logger = logging.getLogger(__name__)

# Longest panel in units of the fastest envelope time scale
MAX_PANEL = 0.25
QUADRATURE_ORDER = 8


def adiabatic_gain(g: float, tau: float, kappa: float = constants.KAPPA) -> float:
    """Amplitude gain exp(2 g^2 tau / kappa) of a constant pulse."""
    return math.exp(2.0 * g * g * tau / kappa)


def rwa_envelope_matrices(
    params: SystemParams, g: float
) -> tuple[np.ndarray, np.ndarray]:
    """Time-independent envelope drift and diffusion on the blue sideband.

    Args:
        params: System parameters.
        g: Coupling rate.

    Returns:
        (drift, diffusion), both 4x4, ordered (X_c, Y_c, X_m, Y_m).
    """
    k = params.kappa
    half = 0.5 * params.gamma
    drift = np.array(
        [
            [-k, 0.0, 0.0, g],
            [0.0, -k, g, 0.0],
            [0.0, g, -half, 0.0],
            [g, 0.0, 0.0, -half],
        ]
    )
    heat = params.gamma_heat
    diffusion = 2.0 * np.diag([k, k, heat, heat])
    return drift, diffusion


def _panel_integrals(
    a: np.ndarray, h: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """exp(A h) together with the integrals of exp(A u) and u exp(A u) on [0, h]."""
    n = a.shape[0]
    aug = np.zeros((3 * n, 3 * n))
    aug[:n, :n] = a
    aug[:n, n : 2 * n] = np.eye(n)
    aug[n : 2 * n, 2 * n :] = np.eye(n)
    e = expm(aug * h)
    phi = e[:n, :n]
    j0 = e[:n, n : 2 * n]
    j1 = h * j0 - e[:n, 2 * n :]
    return phi, j0, j1


def _check_guard(name: str, m: np.ndarray, guard: float) -> None:
    if not np.all(np.isfinite(m)) or np.max(np.abs(m)) > guard:
        raise GainOverflow(f"{name} exceeded overflow guard {guard:.3g}")


def rwa_covariance_constant(
    params: SystemParams,
    g: float,
    tau: float,
    fout: PiecewiseLinearProfile,
    overflow_guard: float = constants.OVERFLOW_GUARD,
) -> BipartiteCovariance:
    """Bipartite covariance of a constant pulse in the RWA, without ODE stepping.

    Args:
        params: System parameters; the initial state is cavity vacuum and
            thermal mechanics at n_0.
        g: Constant coupling.
        tau: Pulse duration.
        fout: Normalized output-mode weighting on [0, tau].
        overflow_guard: Largest admissible magnitude of any propagator entry.

    Returns:
        Covariance over (X_m, Y_m, X_out, Y_out) at t = tau.

    Raises:
        GainOverflow: If an intermediate exponential exceeds the guard.
        NonPositiveArgument: If tau is not positive.
    """
    if not tau > 0:
        raise NonPositiveArgument(f"Pulse duration must be positive, got {tau}")

    a, d = rwa_envelope_matrices(params, g)
    root = math.sqrt(2.0 * params.kappa)
    cavity = np.hstack([np.eye(2), np.zeros((2, 2))])

    # Panels: equal length, aligned with the knots of the weighting
    rate = max(params.kappa, float(np.max(np.abs(np.linalg.eigvals(a)))))
    per_segment = max(1, math.ceil(tau / fout.n_segments * rate / MAX_PANEL))
    n_panels = fout.n_segments * per_segment
    h = tau / n_panels
    f = fout.value_at(np.linspace(0.0, tau, n_panels + 1))
    slopes = np.diff(f) / h

    phi_h, j0_h, j1_h = _panel_integrals(a, h)

    # Powers of the panel propagator: powers[k] = exp(A k h)
    powers = np.empty((n_panels + 1, 4, 4))
    powers[0] = np.eye(4)
    for k in range(n_panels):
        powers[k + 1] = powers[k] @ phi_h
    _check_guard("Envelope propagator", powers[-1], overflow_guard)

    # Backward recursion for W at the panel boundaries
    w = np.zeros((n_panels + 1, 4, 4))
    for k in range(n_panels - 1, -1, -1):
        w[k] = f[k] * j0_h + slopes[k] * j1_h + w[k + 1] @ phi_h
    _check_guard("Output-mode kernel", w, overflow_guard)

    # Gauss-Legendre nodes; r is the distance from a node to its panel end
    xi, weights = np.polynomial.legendre.leggauss(QUADRATURE_ORDER)
    r = 0.5 * h * (1.0 - xi)
    node_phi = np.empty((QUADRATURE_ORDER, 4, 4))
    node_j0 = np.empty_like(node_phi)
    node_j1 = np.empty_like(node_phi)
    for j, rj in enumerate(r):
        node_phi[j], node_j0[j], node_j1[j] = _panel_integrals(a, rj)

    f_nodes = f[:-1, None] + slopes[:, None] * (h - r)[None, :]
    w_nodes = (
        f_nodes[:, :, None, None] * node_j0[None]
        + slopes[:, None, None, None] * node_j1[None]
        + np.einsum("kab,jbc->kjac", w[1:], node_phi)
    )
    # exp(A (tau - s)) at every node, mechanics rows only
    remaining = powers[n_panels - 1 :: -1][:n_panels]
    mech_nodes = np.einsum("kab,jbc->kjac", remaining[:, 2:, :], node_phi)
    scaled = (f_nodes / root)[:, :, None, None]
    out_nodes = root * w_nodes[:, :, :2, :] - scaled * cavity

    h_nodes = np.concatenate([mech_nodes, out_nodes], axis=2)
    noise = 0.5 * h * np.einsum("j,kjab,bc,kjdc->ad", weights, h_nodes, d, h_nodes)

    g0 = np.vstack([powers[-1][2:, :], root * w[0][:2, :]])
    thermal = 2.0 * params.n_0 + 1.0
    v0 = np.diag([1.0, 1.0, thermal, thermal])
    v = symmetrize(g0 @ v0 @ g0.T + noise)
    _check_guard("Bipartite covariance", v, overflow_guard)

    logger.debug(f"RWA covariance for g={g:.4g}, tau={tau:.4g} over {n_panels} panels")
    return BipartiteCovariance(v=v)


def optimal_fout_constant(
    params: SystemParams,
    g: float,
    tau: float,
    n_points: int = constants.FOUT_GRID_POINTS,
) -> PiecewiseLinearProfile:
    """Output weighting matched to the initial mechanical quadrature.

    The profile is proportional to T_m(t) = sqrt(2 kappa) [exp(A t)]_{Y_c, X_m},
    the weight of X_m(0) in the envelope output field, sampled on a dense grid
    and normalized. In the adiabatic regime it approaches exp(g^2 t / kappa).

    Args:
        params: System parameters.
        g: Constant coupling.
        tau: Pulse duration.
        n_points: Number of grid points (knots).

    Returns:
        Unit-normalized profile; the flat profile 1/sqrt(tau) when g = 0.
    """
    if n_points < 2:
        raise ValueError(f"n_points must be at least 2, got {n_points}")

    a, _ = rwa_envelope_matrices(params, g)
    step = expm(a * tau / (n_points - 1))
    weights = np.empty(n_points)
    phi = np.eye(4)
    for k in range(n_points):
        weights[k] = phi[1, 2]
        phi = phi @ step
    weights *= math.sqrt(2.0 * params.kappa)

    if not np.max(np.abs(weights)) > 0:
        return PiecewiseLinearProfile.constant(1.0 / math.sqrt(tau), tau)
    return normalize_fout(PiecewiseLinearProfile(knots=tuple(weights), tau=tau))


def integrate_rwa_envelope(
    params: SystemParams,
    g: float,
    tau: float,
    fout: PiecewiseLinearProfile,
    options: SolverOptions | None = None,
) -> BipartiteCovariance:
    """Step the envelope Lyapunov system numerically.

    Same physics as rwa_covariance_constant but propagated with the adaptive
    integrator, so the two paths can be checked against each other.
    """
    a, d = rwa_envelope_matrices(params, g)
    root = math.sqrt(2.0 * params.kappa)

    def drift(t: float) -> np.ndarray:
        b = np.zeros((6, 6))
        b[:4, :4] = a
        b[4:, :2] = root * float(fout.value_at(t)) * np.eye(2)
        return b

    def diffusion(t: float) -> np.ndarray:
        fv = float(fout.value_at(t))
        out = np.zeros((6, 6))
        out[:4, :4] = d
        out[:2, 4:] = -fv * root * params.sigma_v * np.eye(2)
        out[4:, :2] = out[:2, 4:].T
        out[4:, 4:] = fv * fv * params.sigma_v * np.eye(2)
        return out

    thermal = 2.0 * params.n_0 + 1.0
    u0 = np.diag([1.0, 1.0, thermal, thermal, 0.0, 0.0])
    u = integrate_lyapunov(drift, diffusion, u0, tau, options)
    return BipartiteCovariance(v=u[2:, 2:].copy())
