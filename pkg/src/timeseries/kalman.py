"""
Exact Gaussian likelihood of a regression with ARMA errors.

Errors follow n_t = sum_i phi_i n_{t-i} + e_t - sum_j theta_j e_{t-j}. The
ARMA part is cast in state-space form with state dimension r = max(p, q + 1)
and initialised at its stationary covariance. The outcome and every regressor
column are filtered with the same gains, so the regression coefficients and
the innovation variance can be concentrated out by weighted least squares.

Once the state covariance reaches its steady state the remaining innovations
are produced by ``scipy.signal.lfilter``; series with missing observations
run the exact recursion to the end, skipping the update on missing rows.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import linalg, signal

_STEADY_TOL = 1e-11
_LOG_2PI = float(np.log(2.0 * np.pi))
_TINY = 1e-300

# bound of the unconstrained partial-autocorrelation parameters
TRANSFORM_BOUND = 6.5


def constrain(unconstrained: np.ndarray) -> np.ndarray:
    """
    Map unconstrained values to the coefficients of a stable polynomial.

    Values become partial autocorrelations through tanh, then coefficients
    through the Durbin-Levinson recursion. For c = constrain(u), all roots
    of 1 - sum_i c_i z^i lie outside the unit circle.
    """
    partial = np.tanh(np.asarray(unconstrained, dtype=float))
    coefs = np.zeros(0)
    for k, value in enumerate(partial):
        coefs = np.concatenate([coefs - value * coefs[::-1], [value]]) if k else np.array([value])
    return coefs


def unconstrain(coefs: np.ndarray) -> np.ndarray:
    """Inverse of ``constrain``, clipped to the optimiser bounds."""
    coefs = np.asarray(coefs, dtype=float).copy()
    order = len(coefs)
    partial = np.zeros(order)
    for k in range(order - 1, -1, -1):
        value = float(np.clip(coefs[k], -0.999999, 0.999999))
        partial[k] = value
        if k:
            previous = coefs[:k]
            coefs = (previous + value * previous[::-1]) / (1.0 - value**2)
    return np.clip(np.arctanh(partial), -TRANSFORM_BOUND, TRANSFORM_BOUND)


def polynomial_roots(coefs: np.ndarray) -> np.ndarray:
    """Roots of 1 - sum_i c_i z^i (empty for an empty polynomial)."""
    coefs = np.asarray(coefs, dtype=float)
    trimmed = np.trim_zeros(coefs, "b")
    if trimmed.size == 0:
        return np.zeros(0, dtype=complex)
    # numpy wants highest degree first
    return np.roots(np.concatenate([-trimmed[::-1], [1.0]]))


@dataclass(frozen=True)
class FilterOutput:
    """
    Innovations of a multi-column Kalman filter.

    Attributes:
        innovations: (n, m) one-step prediction errors of every column.
        variances: (n,) innovation variance scale F_t (unit error variance).
        predictions: (n, m) one-step predictions of every column.
        observed: (n,) rows whose update was applied.
    """

    innovations: np.ndarray
    variances: np.ndarray
    predictions: np.ndarray
    observed: np.ndarray


def _system(phi: np.ndarray, theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    p, q = len(phi), len(theta)
    r = max(p, q + 1)
    transition = np.zeros((r, r))
    transition[:p, 0] = phi
    transition[: r - 1, 1:] = np.eye(r - 1)
    selection = np.zeros(r)
    selection[0] = 1.0
    selection[1 : q + 1] = -theta
    return transition, selection


def kalman_filter(data: np.ndarray, observed: np.ndarray, phi: np.ndarray, theta: np.ndarray) -> FilterOutput:
    """
    Filter columns of ``data`` through the ARMA(p, q) state-space model.

    Args:
        data: (n, m) array; rows where ``observed`` is False are ignored.
        observed: (n,) mask of rows used for updating.
        phi: AR coefficients.
        theta: MA coefficients (sign convention of the module docstring).

    Returns:
        FilterOutput: Innovations, variance scales and predictions.
    """
    data = np.asarray(data, dtype=float)
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    n, m = data.shape
    transition, selection = _system(phi, theta)
    r = transition.shape[0]
    noise = np.outer(selection, selection)

    cov = linalg.solve_discrete_lyapunov(transition, noise) if r > 1 or phi.size else noise.copy()
    state = np.zeros((r, m))

    innovations = np.full((n, m), np.nan)
    predictions = np.zeros((n, m))
    variances = np.ones(n)
    all_observed = bool(observed.all())

    t = 0
    while t < n:
        predictions[t] = state[0]
        f_t = cov[0, 0]
        variances[t] = f_t
        if observed[t]:
            innovation = data[t] - state[0]
            innovations[t] = innovation
            gain = transition @ cov[:, 0] / f_t
            state = transition @ state + np.outer(gain, innovation)
            cov = transition @ cov @ transition.T + noise - f_t * np.outer(gain, gain)
        else:
            state = transition @ state
            cov = transition @ cov @ transition.T + noise
        t += 1

        if all_observed and t < n and np.abs(cov - noise).max() < _STEADY_TOL:
            _steady_state_tail(data, innovations, predictions, variances, t, phi, theta)
            break

    return FilterOutput(innovations=innovations, variances=variances, predictions=predictions, observed=observed.copy())


def _steady_state_tail(data: np.ndarray, innovations: np.ndarray, predictions: np.ndarray, variances: np.ndarray, start: int, phi: np.ndarray, theta: np.ndarray) -> None:
    numerator = np.concatenate([[1.0], -np.asarray(phi, dtype=float)])
    denominator = np.concatenate([[1.0], -np.asarray(theta, dtype=float)])
    order = max(len(numerator), len(denominator)) - 1

    if order:
        past_inputs = np.zeros((order, data.shape[1]))
        past_outputs = np.zeros((order, data.shape[1]))
        for k in range(order):
            if start - 1 - k >= 0:
                past_inputs[k] = data[start - 1 - k]
                past_outputs[k] = innovations[start - 1 - k]
        initial = np.column_stack([signal.lfiltic(numerator, denominator, past_outputs[:, col], past_inputs[:, col]) for col in range(data.shape[1])])
        tail, _ = signal.lfilter(numerator, denominator, data[start:], axis=0, zi=initial)
    else:
        tail = data[start:].copy()

    innovations[start:] = tail
    predictions[start:] = data[start:] - tail
    variances[start:] = 1.0


@dataclass(frozen=True)
class Profile:
    """Concentrated likelihood at given ARMA coefficients."""

    loglike: float
    beta: np.ndarray
    sigma2: float
    residuals: np.ndarray
    variances: np.ndarray
    filtered: FilterOutput


def _gls(filtered: FilterOutput, n_exog: int) -> Tuple[np.ndarray, np.ndarray]:
    rows = filtered.observed
    weights = 1.0 / np.sqrt(filtered.variances[rows])
    target = filtered.innovations[rows, 0] * weights
    if n_exog == 0:
        return np.zeros(0), filtered.innovations[:, 0]
    regressors = filtered.innovations[rows, 1:] * weights[:, None]
    beta, *_ = np.linalg.lstsq(regressors, target, rcond=None)
    residuals = filtered.innovations[:, 0] - filtered.innovations[:, 1:] @ beta
    return beta, residuals


def profile_loglike(y: np.ndarray, exog: np.ndarray, observed: np.ndarray, phi: np.ndarray, theta: np.ndarray) -> Profile:
    """
    Log-likelihood with regression coefficients and variance concentrated out.

    Args:
        y: (n,) outcome; ignored where not observed.
        exog: (n, k) regressors (k may be 0).
        observed: (n,) mask of likelihood rows.
        phi: AR coefficients.
        theta: MA coefficients.

    Returns:
        Profile: Log-likelihood, GLS coefficients, innovation variance and
        one-step residuals (NaN on unobserved rows).
    """
    data = np.column_stack([np.where(observed, y, 0.0), exog])
    filtered = kalman_filter(data, observed, phi, theta)
    beta, residuals = _gls(filtered, exog.shape[1])

    rows = observed
    n_obs = int(rows.sum())
    scaled = residuals[rows] ** 2 / filtered.variances[rows]
    sigma2 = float(scaled.sum() / n_obs)
    # exact fits have zero variance
    log_sigma2 = np.log(max(sigma2, _TINY))
    loglike = -0.5 * (n_obs * (_LOG_2PI + log_sigma2 + 1.0) + np.log(filtered.variances[rows]).sum())
    return Profile(loglike=float(loglike), beta=beta, sigma2=sigma2, residuals=residuals, variances=filtered.variances, filtered=filtered)


def full_loglike(y: np.ndarray, exog: np.ndarray, observed: np.ndarray, beta: np.ndarray, phi: np.ndarray, theta: np.ndarray, sigma2: float) -> float:
    """Exact log-likelihood at explicit (beta, phi, theta, sigma2)."""
    if sigma2 <= 0.0:
        return -np.inf
    data = np.column_stack([np.where(observed, y, 0.0), exog])
    filtered = kalman_filter(data, observed, phi, theta)
    residuals = filtered.innovations[:, 0] - filtered.innovations[:, 1:] @ beta if exog.shape[1] else filtered.innovations[:, 0]
    rows = observed
    scale = sigma2 * filtered.variances[rows]
    return float(-0.5 * (_LOG_2PI * rows.sum() + np.log(scale).sum() + (residuals[rows] ** 2 / scale).sum()))


def css_residuals(series: np.ndarray, phi: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Conditional residuals of an ARMA filter started from zeros."""
    numerator = np.concatenate([[1.0], -np.asarray(phi, dtype=float)])
    denominator = np.concatenate([[1.0], -np.asarray(theta, dtype=float)])
    return signal.lfilter(numerator, denominator, series)
