"""
Custom environment module.
Imports and exports the dotenv loader, settings helpers and the validated settings base model.
"""

from .loader import load_environment_variables, get_environment_variables, get_setting, DEFAULT_SETTINGS
from .settings import SettingsModel

__all__ = [
    "load_environment_variables",
    "get_environment_variables",
    "get_setting",
    "DEFAULT_SETTINGS",
    "SettingsModel",
]
