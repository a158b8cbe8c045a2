"""
Protection calculus for first/second-dose allocations.
"""

from typing import List, Sequence, Tuple

import numpy as np
import numpy.typing as npt
import pandas as pd
from pydantic import Field, model_validator

from ..environment import SettingsModel
from ..error import DomainError

_TOLERANCE = 1e-12

# (first-dose fraction, second-dose fraction) rows spending 70 doses per hundred
DEFAULT_ALLOCATIONS: Tuple[Tuple[float, float], ...] = (
    (0.70, 0.00),
    (0.60, 0.10),
    (0.50, 0.20),
    (0.40, 0.30),
    (0.35, 0.35),
)


class EfficacyProfile(SettingsModel):
    """
    First-dose and full (two-dose) vaccine efficacy.

    Attributes:
        ve1: First-dose efficacy in [0, 1].
        ve2: Two-dose efficacy in [ve1, 1].
    """

    ve1: float = Field(ge=0.0, le=1.0)
    ve2: float = Field(ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _ordered(self) -> "EfficacyProfile":
        if self.ve1 > self.ve2:
            raise ValueError(f"ve1 ({self.ve1}) must not exceed ve2 ({self.ve2})")
        return self

    @property
    def marginal(self) -> float:
        """Marginal efficacy of the second dose."""
        return self.ve2 - self.ve1


def protection_level(profile: EfficacyProfile, f1: float, f2: float) -> float:
    """
    Average protection of a population.

    Args:
        profile: Vaccine efficacy.
        f1: Fraction with at least one dose.
        f2: Fraction fully vaccinated.

    Returns:
        float: ve1 * f1 + (ve2 - ve1) * f2.

    Raises:
        DomainError: If f2 > f1, f1 > 1 or a fraction is negative.

    Example:
        >>> round(protection_level(EfficacyProfile(ve1=0.9, ve2=0.95), 0.7, 0.0), 4)
        0.63
    """
    if f1 < 0 or f2 < 0:
        raise DomainError(f"Fractions must be non-negative (f1={f1}, f2={f2})")
    if f1 > 1 + _TOLERANCE:
        raise DomainError(f"f1 must not exceed 1 (f1={f1})")
    if f2 > f1 + _TOLERANCE:
        raise DomainError(f"Fully vaccinated fraction exceeds first-dose fraction (f1={f1}, f2={f2})")
    return profile.ve1 * f1 + profile.marginal * f2


def protection_levels(profile: EfficacyProfile, f1: npt.ArrayLike, f2: npt.ArrayLike) -> np.ndarray:
    """Vectorised protection_level without domain checks."""
    return profile.ve1 * np.asarray(f1, dtype=float) + profile.marginal * np.asarray(f2, dtype=float)


def protection_table(profile: EfficacyProfile, allocations: Sequence[Tuple[float, float]] = DEFAULT_ALLOCATIONS) -> pd.DataFrame:
    """
    Protection of fixed dose allocations.

    Each allocation is (fraction with at least one dose, fraction fully
    vaccinated).

    Args:
        profile: Vaccine efficacy.
        allocations: Rows of (f1, f2).

    Returns:
        pd.DataFrame: Columns first_dose, second_dose, protection.
    """
    rows: List[dict] = []
    for f1, f2 in allocations:
        rows.append({
            "first_dose": f1,
            "second_dose": f2,
            "protection": protection_level(profile, f1, f2),
        })
    return pd.DataFrame(rows, columns=["first_dose", "second_dose", "protection"])
