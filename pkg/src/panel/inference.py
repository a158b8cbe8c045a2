"""
Tests on panel coefficients with country-clustered standard errors.

p-values use a t distribution with G - 1 degrees of freedom (G countries).
"""

from typing import Mapping, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from .estimator import PanelFit

# (p-value threshold, marker) for the 99%, 95% and 90% levels
SIGNIFICANCE = ((0.01, "***"), (0.05, "**"), (0.10, "*"))


def stars(pvalue: float) -> str:
    """Significance marker of a p-value."""
    if not np.isfinite(pvalue):
        return ""
    for threshold, marker in SIGNIFICANCE:
        if pvalue < threshold:
            return marker
    return ""


def _pvalue(t_stat: float, n_clusters: int) -> float:
    if not np.isfinite(t_stat) or n_clusters < 2:
        return float("nan")
    return float(2.0 * stats.t.sf(abs(t_stat), df=n_clusters - 1))


def linear_combo(fit: PanelFit, weights: Mapping[str, float]) -> Tuple[float, float]:
    """
    Estimate and standard error of a weighted sum of coefficients.

    Args:
        fit: Panel fit.
        weights: Coefficient name -> weight.

    Returns:
        Tuple[float, float]: w'b and sqrt(w' V w).

    Raises:
        CoefficientLookupError: If a name is not in the fit.
    """
    vector = np.zeros(len(fit.names))
    for name, weight in weights.items():
        vector[fit.index(name)] += weight
    estimate = float(vector @ fit.params)
    variance = float(vector @ fit.cov @ vector)
    return estimate, float(np.sqrt(variance)) if variance >= 0 else float("nan")


def coefficient_table(fit: PanelFit) -> pd.DataFrame:
    """
    Flat coefficient table.

    Returns:
        pd.DataFrame: Columns name, estimate, std_error, t, p, stars.
    """
    errors = fit.std_errors
    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = fit.params / errors
    pvalues = [_pvalue(value, fit.n_clusters) for value in t_stats]
    return pd.DataFrame({
        "name": fit.names,
        "estimate": fit.params,
        "std_error": errors,
        "t": t_stats,
        "p": pvalues,
        "stars": [stars(p) for p in pvalues],
    })


def chinese_vaccine_tests(fit: PanelFit) -> pd.DataFrame:
    """
    Effects of vaccine terms in Chinese-vaccine countries.

    Each Chinese interaction is added to its base term, e.g. V1_l21 + V1CHN_l21.

    Returns:
        pd.DataFrame: Columns name, estimate, std_error, t, p, stars; empty
        when the fit has no Chinese terms.
    """
    rows = []
    base_terms = {(term.source, term.lag, term.transform, term.partner): term for term in fit.terms if not term.chinese}
    for term in fit.terms:
        if not term.chinese:
            continue
        base = base_terms[(term.source, term.lag, term.transform, term.partner)]
        estimate, error = linear_combo(fit, {base.name: 1.0, term.name: 1.0})
        t_stat = estimate / error if error > 0 else float("nan")
        pvalue = _pvalue(t_stat, fit.n_clusters)
        rows.append({"name": f"{base.name}+{term.name}", "estimate": estimate, "std_error": error, "t": t_stat, "p": pvalue, "stars": stars(pvalue)})
    return pd.DataFrame(rows, columns=["name", "estimate", "std_error", "t", "p", "stars"])
