"""
Simulation error module.
Defines counterfactual simulation and summary exceptions.
"""

from .base import BaseError


class SimulationError(BaseError):
    """
    Exception raised when a counterfactual simulation cannot run.

    Args:
        message (str): Error message. Defaults to "Simulation error".
    """

    def __init__(self, message="Simulation error"):
        super().__init__(message, "SIM_ERR")


class SummaryError(BaseError):
    """
    Exception raised when a summary window is empty or outside the result range.

    Args:
        message (str): Error message. Defaults to "Summary error".
    """

    def __init__(self, message="Summary error"):
        super().__init__(message, "SUMMARY_ERR")
