"""Gaussian-process regression with a Matern-5/2 ARD kernel.

Hyperparameters are optimized in log space by multi-start L-BFGS-B on the
negative log marginal likelihood with its analytic gradient. Inputs are
expected in unit-box coordinates; outputs are standardized internally when
requested. A Gram matrix that fails to factorize is retried with growing
diagonal jitter up to MAX_JITTER.
"""

import logging
import math

import numpy as np
from scipy.linalg import LinAlgError, cho_solve, cholesky, solve_triangular
from scipy.optimize import minimize

from optosqueeze import constants
from optosqueeze.bayesopt.types import GpConfig, GpSurrogate
from optosqueeze.exceptions import IllConditioned

logger = logging.getLogger(__name__)

SQRT5 = math.sqrt(5.0)
JITTER_LADDER = (0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, constants.MAX_JITTER)


def matern52(
    x1: np.ndarray, x2: np.ndarray, lengthscales: np.ndarray, signal_var: float
) -> np.ndarray:
    """Matern-5/2 kernel matrix with per-dimension length-scales."""
    diff = (x1[:, None, :] - x2[None, :, :]) / lengthscales
    r = np.sqrt(np.sum(diff * diff, axis=-1))
    s5r = SQRT5 * r
    return signal_var * (1.0 + s5r + s5r * s5r / 3.0) * np.exp(-s5r)


def _negative_log_likelihood(
    theta: np.ndarray,
    sq_diffs: np.ndarray,
    y: np.ndarray,
    fixed_noise: float | None,
) -> tuple[float, np.ndarray]:
    """Negative log marginal likelihood and its gradient in log parameters."""
    n, _, d = sq_diffs.shape
    ls2 = np.exp(2.0 * theta[:d])
    signal_var = math.exp(theta[d])
    noise_var = fixed_noise if fixed_noise is not None else math.exp(theta[d + 1])

    scaled = sq_diffs / ls2
    r = np.sqrt(np.sum(scaled, axis=-1))
    s5r = SQRT5 * r
    decay = np.exp(-s5r)
    k = signal_var * (1.0 + s5r + s5r * s5r / 3.0) * decay

    try:
        chol = cholesky(k + (noise_var + 1e-10) * np.eye(n), lower=True)
    except LinAlgError:
        return 1e25, np.zeros_like(theta)

    alpha = cho_solve((chol, True), y)
    log_det = np.sum(np.log(np.diag(chol)))
    nll = 0.5 * y @ alpha + log_det + 0.5 * n * math.log(2 * math.pi)

    inner = np.outer(alpha, alpha) - cho_solve((chol, True), np.eye(n))
    common = signal_var * (5.0 / 3.0) * (1.0 + s5r) * decay
    grad = np.empty_like(theta)
    grad[:d] = -0.5 * np.einsum("ij,ij,ijk->k", inner, common, scaled)
    grad[d] = -0.5 * np.sum(inner * k)
    if fixed_noise is None:
        grad[d + 1] = -0.5 * np.trace(inner) * noise_var
    return float(nll), grad


def _factorize(
    inputs: np.ndarray, lengthscales: np.ndarray, signal_var: float, noise_var: float
) -> tuple[np.ndarray, float]:
    """Cholesky factor of the noisy Gram matrix with jitter escalation."""
    k = matern52(inputs, inputs, lengthscales, signal_var)
    n = k.shape[0]
    for jitter in JITTER_LADDER:
        try:
            diagonal = (noise_var + jitter * signal_var) * np.eye(n)
            chol = cholesky(k + diagonal, lower=True)
        except LinAlgError:
            continue
        if jitter > 0:
            logger.warning(f"Gram matrix needed jitter {jitter:.1e} to factorize")
        return chol, jitter
    raise IllConditioned(
        f"Gram matrix not positive definite after jitter {constants.MAX_JITTER:.0e}"
    )


def gp_fit(
    inputs: np.ndarray,
    outputs: np.ndarray,
    config: GpConfig | None = None,
    rng: np.random.Generator | None = None,
    initial: np.ndarray | None = None,
) -> GpSurrogate:
    """Fit a GP surrogate.

    Args:
        inputs: M x d points in unit-box coordinates, M >= 2.
        outputs: M observed values.
        config: Surrogate settings.
        rng: Generator for the random restarts.
        initial: Log hyperparameters to start from (or to use as-is when
            fitting is disabled).

    Returns:
        The fitted surrogate.

    Raises:
        ValueError: If fewer than 2 points are given or shapes disagree.
        IllConditioned: If the Gram matrix cannot be factorized.
    """
    config = config or GpConfig()
    rng = rng if rng is not None else np.random.default_rng(0)
    x = np.atleast_2d(np.asarray(inputs, dtype=float))
    y_raw = np.asarray(outputs, dtype=float).ravel()
    if x.shape[0] < 2:
        raise ValueError(f"gp_fit needs at least 2 points, got {x.shape[0]}")
    if x.shape[0] != y_raw.shape[0]:
        raise ValueError(f"Got {x.shape[0]} inputs but {y_raw.shape[0]} outputs")
    n, d = x.shape

    if config.normalize_y:
        y_mean = float(np.mean(y_raw))
        y_scale = float(np.std(y_raw))
        if not y_scale > 0:
            y_scale = 1.0
    else:
        y_mean, y_scale = 0.0, 1.0
    y = (y_raw - y_mean) / y_scale

    fixed_noise = None if config.noise_var is None else config.noise_var / y_scale**2

    log_bounds = [tuple(np.log(config.lengthscale_bounds))] * d
    log_bounds.append(tuple(np.log(config.signal_var_bounds)))
    if fixed_noise is None:
        log_bounds.append(tuple(np.log(config.noise_var_bounds)))
    lows = np.array([b[0] for b in log_bounds])
    highs = np.array([b[1] for b in log_bounds])

    default = np.concatenate(
        [np.full(d, math.log(config.lengthscale)), [math.log(config.signal_var)]]
    )
    if fixed_noise is None:
        default = np.append(default, math.log(1e-4))
    theta = default
    if initial is not None:
        theta = np.asarray(initial, dtype=float)[: len(default)]
        theta = np.concatenate([theta, default[len(theta) :]])
        if config.fit_hyperparameters:
            theta = np.clip(theta, lows, highs)

    if config.fit_hyperparameters:
        sq_diffs = (x[:, None, :] - x[None, :, :]) ** 2
        starts = [theta]
        if initial is not None:
            starts.append(default)
        starts.extend(rng.uniform(lows, highs) for _ in range(config.n_restarts - 1))

        best_value = math.inf
        for start in starts:
            result = minimize(
                _negative_log_likelihood,
                start,
                args=(sq_diffs, y, fixed_noise),
                jac=True,
                method="L-BFGS-B",
                bounds=log_bounds,
            )
            if result.fun < best_value:
                best_value, theta = result.fun, result.x
        logger.debug(f"GP hyperparameters fitted, nll={best_value:.6g}")

    lengthscales = np.exp(theta[:d])
    signal_var = math.exp(theta[d])
    noise_var = fixed_noise if fixed_noise is not None else math.exp(theta[d + 1])

    chol, jitter = _factorize(x, lengthscales, signal_var, noise_var)
    alpha = cho_solve((chol, True), y)

    return GpSurrogate(
        inputs=x,
        outputs=y_raw,
        lengthscales=lengthscales,
        signal_var=signal_var,
        noise_var=noise_var,
        y_mean=y_mean,
        y_scale=y_scale,
        y_best=float(np.min(y_raw)),
        chol=chol,
        alpha=alpha,
        jitter=jitter,
    )


def gp_posterior(model: GpSurrogate, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Posterior mean and standard deviation of the latent function.

    Args:
        model: Fitted surrogate.
        x: Query points (q x d, or a single d-vector) in unit-box coordinates.

    Returns:
        (mean, std), each of shape (q,), in original output units. The
        variance is clamped at 0 against round-off.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    k_star = matern52(x, model.inputs, model.lengthscales, model.signal_var)
    mean = k_star @ model.alpha
    v = solve_triangular(model.chol, k_star.T, lower=True)
    var = np.maximum(model.signal_var - np.sum(v * v, axis=0), 0.0)
    return model.y_mean + model.y_scale * mean, model.y_scale * np.sqrt(var)
