"""
Numeric helpers shared by the estimators.

Lag and difference helpers work along the last axis and pad with NaN, so a
value at position t only ever uses data dated <= t.
"""

from typing import List, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from scipy import linalg

LOG_FLOOR = 0.5


def shift(values: npt.ArrayLike, lag: int) -> np.ndarray:
    """
    Lag an array along its last axis.

    Args:
        values: 1-D or 2-D array (rows are countries for panels).
        lag: Non-negative number of periods; out[..., t] = values[..., t - lag].

    Returns:
        np.ndarray: Float array of the same shape, NaN where no lagged value exists.

    Raises:
        ValueError: If lag is negative.
    """
    if lag < 0:
        raise ValueError(f"lag must be non-negative (got {lag})")
    values = np.asarray(values, dtype=float)
    out = np.full(values.shape, np.nan)
    if lag == 0:
        out[...] = values
    elif lag < values.shape[-1]:
        out[..., lag:] = values[..., :-lag]
    return out


def difference(values: npt.ArrayLike, step: int = 1) -> np.ndarray:
    """Return values[t] - values[t - step] along the last axis, NaN-padded."""
    values = np.asarray(values, dtype=float)
    return values - shift(values, step)


def floored_log(values: npt.ArrayLike, floor: float = LOG_FLOOR) -> Tuple[np.ndarray, int]:
    """
    Log of counts with a floor for zeros.

    Args:
        values: Non-negative counts; NaN stays NaN.
        floor: Values below it are raised to it before the log.

    Returns:
        Tuple[np.ndarray, int]: log(max(x, floor)) and the number of floored cells.
    """
    values = np.asarray(values, dtype=float)
    with np.errstate(invalid="ignore"):
        floored = np.isfinite(values) & (values < floor)
    return np.log(np.where(floored, floor, values)), int(floored.sum())


def rolling_sum(values: npt.ArrayLike, window: int) -> np.ndarray:
    """Trailing sum over ``window`` periods along the last axis; NaN if any term is missing."""
    values = np.asarray(values, dtype=float)
    out = np.zeros(values.shape)
    for lag in range(window):
        out = out + shift(values, lag)
    return out


def dependent_columns(matrix: np.ndarray, names: Sequence[str], rtol: float = 1e-10) -> List[str]:
    """
    Find a minimal set of linearly dependent columns.

    Uses a column-pivoted QR decomposition; the first column beyond the
    numerical rank is regressed on the independent ones and the columns with
    non-zero weight form the returned set.

    Args:
        matrix: Design matrix (rows x columns).
        names: Column names.
        rtol: Relative tolerance on the diagonal of R.

    Returns:
        List[str]: Names of a dependent set in original column order; empty
        when the matrix has full column rank.
    """
    matrix = np.asarray(matrix, dtype=float)
    n_cols = matrix.shape[1]
    if n_cols == 0:
        return []

    norms = np.linalg.norm(matrix, axis=0)
    zero = np.flatnonzero(norms == 0)
    if zero.size:
        return [names[int(zero[0])]]

    scaled = matrix / norms
    _, r_factor, pivots = linalg.qr(scaled, mode="economic", pivoting=True)
    diagonal = np.abs(np.diag(r_factor))
    rank = int((diagonal > rtol * diagonal[0]).sum()) if diagonal.size else 0
    if rank >= n_cols:
        return []

    basis = pivots[:rank]
    target = pivots[rank]
    coefs, *_ = np.linalg.lstsq(scaled[:, basis], scaled[:, target], rcond=None)
    involved = [int(col) for col, coef in zip(basis, coefs) if abs(coef) > 1e-8]
    return [names[col] for col in sorted([*involved, int(target)])]
