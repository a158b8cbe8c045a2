"""
ARIMA(p, 1, q) regressions with exogenous regressors.

The differenced log outcome is regressed on the design columns with ARMA(p, q)
errors. Estimation maximises the exact Gaussian likelihood; regression
coefficients and the innovation variance are concentrated out, so the
optimiser only searches the ARMA coefficients, reparameterised through partial
autocorrelations to keep both polynomials stable.
"""

import itertools
from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Tuple, get_args

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from pydantic import Field
from scipy import optimize
from statsmodels.tools.numdiff import approx_hess3

from ..data import dependent_columns
from ..environment import SettingsModel
from ..error import DesignError, FitError, SelectionError, ValidationError
from ..log import get_logger
from .design import TsDesign
from .kalman import TRANSFORM_BOUND, constrain, css_residuals, full_loglike, polynomial_roots, profile_loglike, unconstrain

logger = get_logger(__name__)

MAX_ORDER = 10
MAX_RESTARTS = 5
ROOT_MARGIN = 1e-6
_GRADIENT_TOL = 1e-4

ANCHOR = Literal["first", "previous"]
_valid_anchors = get_args(ANCHOR)


class ArimaOrder(SettingsModel):
    """
    ARIMA order with the differencing order fixed at one.

    Attributes:
        p: AR order.
        d: Differencing order; always 1.
        q: MA order.
    """

    p: int = Field(default=0, ge=0, le=MAX_ORDER)
    d: Literal[1] = 1
    q: int = Field(default=0, ge=0, le=MAX_ORDER)

    @property
    def n_arma(self) -> int:
        return self.p + self.q

    def __str__(self) -> str:
        return f"({self.p},{self.d},{self.q})"


@dataclass(frozen=True)
class ArimaFit:
    """
    Estimated ARIMA-X model.

    Attributes:
        country: Country identifier of the design.
        outcome: "cases" or "deaths".
        order: ARIMA order.
        exog_names: Regression coefficient names (``const`` first).
        params: Regression coefficients.
        bse: Standard errors of ``params``.
        ar: AR coefficients phi_1..phi_p.
        ar_se: Standard errors of ``ar``.
        ma: MA coefficients theta_1..theta_q, for errors
            n_t = sum phi_i n_{t-i} + e_t - sum theta_j e_{t-j}.
        ma_se: Standard errors of ``ma``.
        sigma2: Innovation variance.
        loglike: Maximised log-likelihood.
        n_obs: Observations in the likelihood.
        residuals: One-step residuals (NaN on missing rows).
        predicted: One-step predictions of the differenced outcome.
        dates: Row dates.
        convergence: Optimiser report.
    """

    country: str
    outcome: str
    order: ArimaOrder
    exog_names: List[str]
    params: np.ndarray
    bse: np.ndarray
    ar: np.ndarray
    ar_se: np.ndarray
    ma: np.ndarray
    ma_se: np.ndarray
    sigma2: float
    loglike: float
    n_obs: int
    residuals: np.ndarray
    predicted: np.ndarray
    dates: pd.DatetimeIndex
    convergence: Dict[str, Any] = field(default_factory=dict)

    @property
    def n_params(self) -> int:
        return len(self.params) + self.order.n_arma + 1

    @property
    def aic(self) -> float:
        return -2.0 * self.loglike + 2.0 * self.n_params

    @property
    def aicc(self) -> float:
        k, n = self.n_params, self.n_obs
        if n - k - 1 <= 0:
            return float("inf")
        return self.aic + 2.0 * k * (k + 1) / (n - k - 1)

    @property
    def bic(self) -> float:
        return -2.0 * self.loglike + self.n_params * np.log(self.n_obs)

    @property
    def converged(self) -> bool:
        return bool(self.convergence.get("converged", False))

    def coefficient(self, name: str) -> Tuple[float, float]:
        """Estimate and standard error of a named regression coefficient."""
        if name not in self.exog_names:
            raise ValidationError(f"Unknown coefficient '{name}'. Must be one of {self.exog_names}")
        idx = self.exog_names.index(name)
        return float(self.params[idx]), float(self.bse[idx])

    def coefficient_frame(self) -> pd.DataFrame:
        names = [*self.exog_names, *[f"ar.L{i + 1}" for i in range(self.order.p)], *[f"ma.L{j + 1}" for j in range(self.order.q)], "sigma2"]
        estimates = np.concatenate([self.params, self.ar, self.ma, [self.sigma2]])
        errors = np.concatenate([self.bse, self.ar_se, self.ma_se, [np.nan]])
        with np.errstate(divide="ignore", invalid="ignore"):
            z = estimates / errors
        return pd.DataFrame({"estimate": estimates, "std_error": errors, "z": z}, index=pd.Index(names, name="term"))

    def to_record(self) -> Dict[str, Any]:
        """JSON-ready summary of the fit."""
        roots = ar_ma_roots(self)
        return {
            "country": self.country,
            "outcome": self.outcome,
            "order": [self.order.p, self.order.d, self.order.q],
            "coefficients": {name: float(value) for name, value in zip(self.exog_names, self.params)},
            "std_errors": {name: float(value) for name, value in zip(self.exog_names, self.bse)},
            "ar": self.ar.tolist(),
            "ar_se": self.ar_se.tolist(),
            "ma": self.ma.tolist(),
            "ma_se": self.ma_se.tolist(),
            "sigma2": self.sigma2,
            "loglike": self.loglike,
            "aic": self.aic,
            "aicc": self.aicc,
            "bic": self.bic,
            "n_obs": self.n_obs,
            "ar_root_moduli": np.abs(roots["ar"]).tolist(),
            "ma_root_moduli": np.abs(roots["ma"]).tolist(),
            "convergence": self.convergence,
        }


def ar_ma_roots(fit: ArimaFit) -> Dict[str, np.ndarray]:
    """
    Roots of the AR polynomial 1 - sum phi_i z^i and MA polynomial 1 - sum theta_j z^j.

    Returns:
        Dict[str, np.ndarray]: Complex roots under keys "ar" and "ma".
    """
    return {"ar": polynomial_roots(fit.ar), "ma": polynomial_roots(fit.ma)}


def _roots_ok(phi: np.ndarray, theta: np.ndarray) -> bool:
    for coefs in (phi, theta):
        roots = polynomial_roots(coefs)
        if roots.size and np.abs(roots).min() <= 1.0 + ROOT_MARGIN:
            return False
    return True


def _split(unconstrained: np.ndarray, p: int) -> Tuple[np.ndarray, np.ndarray]:
    return constrain(unconstrained[:p]), constrain(unconstrained[p:])


def _check_design(design: TsDesign) -> None:
    rows = design.valid
    involved = dependent_columns(design.exog[rows], design.exog_names)
    if involved:
        raise DesignError(involved)


def _css_start(design: TsDesign, order: ArimaOrder) -> np.ndarray:
    rows = design.valid
    beta, *_ = np.linalg.lstsq(design.exog[rows], design.y[rows], rcond=None)
    # interior gaps are closed for the conditional fit
    noise = (design.y - design.exog @ beta)[rows]
    p = order.p

    def css(unconstrained: np.ndarray) -> float:
        phi, theta = _split(unconstrained, p)
        residuals = css_residuals(noise, phi, theta)[max(p, 1):]
        return float(residuals @ residuals) / len(residuals)

    bounds = [(-TRANSFORM_BOUND, TRANSFORM_BOUND)] * order.n_arma
    result = optimize.minimize(css, np.zeros(order.n_arma), method="L-BFGS-B", bounds=bounds)
    return np.asarray(result.x, dtype=float)


def _maximise(design: TsDesign, order: ArimaOrder, start: np.ndarray) -> Tuple[optimize.OptimizeResult, bool]:
    rows = design.valid
    n_obs = int(rows.sum())

    def objective(unconstrained: np.ndarray) -> float:
        phi, theta = _split(unconstrained, order.p)
        value = -profile_loglike(design.y, design.exog, rows, phi, theta).loglike / n_obs
        return value if np.isfinite(value) else 1e10

    bounds = [(-TRANSFORM_BOUND, TRANSFORM_BOUND)] * order.n_arma
    result = optimize.minimize(objective, start, method="L-BFGS-B", bounds=bounds, options={"maxiter": 500})
    gradient = np.asarray(getattr(result, "jac", np.zeros(order.n_arma)), dtype=float)
    converged = bool(result.success) or (gradient.size > 0 and float(np.abs(gradient).max()) < _GRADIENT_TOL)
    return result, converged


def _standard_errors(design: TsDesign, beta: np.ndarray, phi: np.ndarray, theta: np.ndarray, sigma2: float) -> np.ndarray:
    k, p = len(beta), len(phi)
    rows = design.valid

    def loglike(params: np.ndarray) -> float:
        return full_loglike(design.y, design.exog, rows, params[:k], params[k : k + p], params[k + p : -1], params[-1])

    params = np.concatenate([beta, phi, theta, [sigma2]])
    try:
        with np.errstate(all="ignore"):
            hessian = approx_hess3(params, loglike)
            covariance = np.linalg.inv(-hessian)
        variances = np.diag(covariance)
    except (np.linalg.LinAlgError, ValueError, FloatingPointError):
        variances = np.full(len(params), np.nan)

    if not np.isfinite(variances).all() or (variances < 0).any():
        logger.warning("Observed information not invertible; standard errors set to NaN", extra={"order": [p, 1, len(theta)]})
        variances = np.where(np.isfinite(variances) & (variances >= 0), variances, np.nan)
    return np.sqrt(variances)


def _predictions(design: TsDesign, profile, beta: np.ndarray) -> np.ndarray:
    exog = design.exog.copy()
    if design.exog_names and design.exog_names[0] == "const":
        exog[:, 0] = 1.0
    state = profile.filtered.predictions
    noise = state[:, 0] - state[:, 1:] @ beta if len(beta) else state[:, 0]
    return exog @ beta + noise


def _estimate(design: TsDesign, order: ArimaOrder, standard_errors: bool) -> ArimaFit:
    rows = design.valid
    attempts: List[Dict[str, Any]] = []
    best: Tuple[float, np.ndarray, bool] | None = None

    if order.n_arma == 0:
        best = (0.0, np.zeros(0), True)
        attempts.append({"restart": 0, "success": True, "iterations": 0, "message": "closed form"})
    else:
        start = _css_start(design, order)
        rng = np.random.default_rng([order.p, order.q])
        for restart in range(MAX_RESTARTS + 1):
            initial = start if restart == 0 else np.clip(start + rng.normal(0.0, 0.5, size=start.shape), -TRANSFORM_BOUND, TRANSFORM_BOUND)
            result, converged = _maximise(design, order, initial)
            phi, theta = _split(result.x, order.p)
            stable = _roots_ok(phi, theta)
            attempts.append({"restart": restart, "success": converged, "stable": stable, "iterations": int(result.nit), "objective": float(result.fun), "message": str(result.message)})
            accepted = converged and stable
            if best is None or (accepted and not best[2]) or (accepted == best[2] and result.fun < best[0]):
                best = (float(result.fun), np.asarray(result.x), accepted)
            if accepted:
                break

    _, unconstrained, accepted = best
    phi, theta = _split(unconstrained, order.p)
    profile = profile_loglike(design.y, design.exog, rows, phi, theta)
    convergence = {"converged": accepted, "restarts": len(attempts) - 1, "attempts": attempts}

    if not accepted:
        raise FitError(f"{design.country} {design.outcome} ARIMA{order}: no converged stable optimum after {MAX_RESTARTS} restarts", diagnostics={**convergence, "loglike": profile.loglike, "ar": phi.tolist(), "ma": theta.tolist()})

    n_beta = len(profile.beta)
    if standard_errors:
        errors = _standard_errors(design, profile.beta, phi, theta, profile.sigma2)
    else:
        errors = np.full(n_beta + order.n_arma + 1, np.nan)

    return ArimaFit(
        country=design.country,
        outcome=design.outcome,
        order=order,
        exog_names=list(design.exog_names),
        params=profile.beta,
        bse=errors[:n_beta],
        ar=phi,
        ar_se=errors[n_beta : n_beta + order.p],
        ma=theta,
        ma_se=errors[n_beta + order.p : n_beta + order.n_arma],
        sigma2=profile.sigma2,
        loglike=profile.loglike,
        n_obs=int(rows.sum()),
        residuals=np.where(rows, profile.residuals, np.nan),
        predicted=_predictions(design, profile, profile.beta),
        dates=design.dates,
        convergence=convergence,
    )


def fit_arimax(design: TsDesign, order: ArimaOrder | None = None) -> ArimaFit:
    """
    Fit a regression with ARMA errors by exact maximum likelihood.

    Start values come from a conditional-sum-of-squares fit on least-squares
    residuals; the exact likelihood is then maximised with L-BFGS-B, with up
    to five perturbed restarts when the optimiser fails or ends on a
    non-stable polynomial. With p = q = 0 the fit is ordinary least squares.

    Args:
        design: Differenced regression design.
        order: ARIMA order; defaults to (0, 1, 0).

    Returns:
        ArimaFit: Estimates with standard errors from the inverse observed information.

    Raises:
        DesignError: If design columns are exactly collinear.
        FitError: If no restart converges to a stable optimum.
    """
    order = order or ArimaOrder()
    _check_design(design)
    fit = _estimate(design, order, standard_errors=True)
    logger.info("ARIMA-X fit", extra={"country": design.country, "outcome": design.outcome, "order": str(order), "loglike": fit.loglike, "aicc": fit.aicc, "restarts": fit.convergence["restarts"]})
    return fit


def _candidate(design: TsDesign, order: ArimaOrder) -> Dict[str, Any]:
    try:
        fit = _estimate(design, order, standard_errors=False)
    except FitError as e:
        return {"p": order.p, "q": order.q, "aicc": np.nan, "converged": False, "message": e.message}
    return {"p": order.p, "q": order.q, "aicc": fit.aicc, "converged": True, "message": ""}


def order_grid(design: TsDesign, p_max: int = 5, q_max: int = 5, jobs: int = 1) -> pd.DataFrame:
    """
    AICc of every (p, q) on the grid [0, p_max] x [0, q_max].

    Returns:
        pd.DataFrame: Columns p, q, aicc, converged, message.
    """
    if p_max < 0 or q_max < 0:
        raise ValidationError("Order bounds must be non-negative")
    _check_design(design)
    orders = [ArimaOrder(p=p, q=q) for p, q in itertools.product(range(p_max + 1), range(q_max + 1))]
    rows = Parallel(n_jobs=jobs)(delayed(_candidate)(design, order) for order in orders)
    return pd.DataFrame(rows, columns=["p", "q", "aicc", "converged", "message"])


def select_order(design: TsDesign, p_max: int = 5, q_max: int = 5, jobs: int = 1) -> ArimaOrder:
    """
    Select the AICc-minimising ARIMA(p, 1, q) order by exhaustive grid search.

    Only converged fits with stationary and invertible polynomials compete.
    Ties are broken by the smaller p + q, then the smaller q.

    Args:
        design: Differenced regression design.
        p_max: Largest AR order.
        q_max: Largest MA order.
        jobs: Parallel workers for the grid.

    Returns:
        ArimaOrder: Selected order.

    Raises:
        ValidationError: If a bound is negative.
        SelectionError: If no candidate converges.
    """
    grid = order_grid(design, p_max, q_max, jobs)
    candidates = grid[grid["converged"]].copy()
    if candidates.empty:
        raise SelectionError(f"{design.country} {design.outcome}: none of {len(grid)} candidate orders converged")

    candidates["size"] = candidates["p"] + candidates["q"]
    best = candidates.sort_values(["aicc", "size", "q"], kind="mergesort").iloc[0]
    order = ArimaOrder(p=int(best["p"]), q=int(best["q"]))
    logger.info("ARIMA order selected", extra={"country": design.country, "outcome": design.outcome, "order": str(order), "aicc": float(best["aicc"]), "candidates": len(grid), "converged": len(candidates)})
    return order


def fitted_path(fit: ArimaFit, design: TsDesign, anchor: ANCHOR = "first") -> pd.Series:
    """
    In-sample fitted log levels.

    Args:
        fit: Fit of ``design``.
        design: Design the fit was estimated on.
        anchor: "first" re-integrates one-step predictions of the differenced
            outcome from the level before the first row, so observed minus
            fitted equals the cumulated residuals. "previous" adds each
            prediction to the previous day's observed level.

    Returns:
        pd.Series: Fitted log levels indexed by date.
    """
    if anchor not in _valid_anchors:
        raise ValidationError(f"Invalid anchor: {anchor}. Must be one of {_valid_anchors}")
    if len(fit.predicted) != len(design.dates):
        raise ValidationError("Fit and design have different lengths")

    if anchor == "first":
        values = design.log_level_prev[0] + np.cumsum(fit.predicted)
    else:
        values = design.log_level_prev + fit.predicted
    return pd.Series(values, index=design.dates, name="fitted")
