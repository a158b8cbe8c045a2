from pathlib import Path
import logging
import os
from typing import List, Tuple

from dotenv import load_dotenv

# stdlib logger: this module runs before logging is configured
logger = logging.getLogger(__name__)

SETTING_PREFIX = "VAXSTRAT_"

DEFAULT_SETTINGS = {
    "LOG_DIR": "logs",
    "LOG_FORMAT": "json",
    "LOG_LEVEL": "INFO",
    "JOBS": "1",
    "SEED": "20210708",
}


def load_environment_variables(filename: str = ".env", file_path: str = ".") -> None:
    """
    Load environment variables from a .env file.

    Args:
        filename (str): Name of the environment file. Defaults to ".env".
        file_path (str): Path where the environment file is located. Defaults to ".".

    Raises:
        FileNotFoundError: If the specified file doesn't exist.
    """
    path_file = Path(file_path)
    path_file = path_file.resolve() / filename

    if not path_file.exists():
        raise FileNotFoundError(f"File {filename} not found in {path_file.parent.as_posix()}.")

    load_dotenv(dotenv_path=path_file.as_posix(), override=True)
    logger.debug("Environment variables loaded", extra={"env_file": path_file.as_posix()})


def get_environment_variables(env_vars: List[str] | str) -> Tuple:
    """
    Retrieve environment variables and return them as a tuple.

    Args:
        env_vars (List[str] | str): Environment variable name(s) to retrieve.

    Returns:
        Tuple: Values of the requested environment variables.

    Raises:
        KeyError: If a variable is not set.
    """
    if isinstance(env_vars, str):
        env_vars = [env_vars]

    return tuple(os.environ[env_var] for env_var in env_vars)


def get_setting(name: str, default: str | None = None) -> str | None:
    """
    Read an optional toolkit setting from the environment.

    The name is looked up with the ``VAXSTRAT_`` prefix; built-in defaults
    apply when neither the variable nor ``default`` is given.

    Args:
        name (str): Setting name, with or without the prefix (e.g. "JOBS").
        default (str | None): Fallback overriding the built-in default.

    Returns:
        str | None: The setting value, or None when unknown and unset.

    Example:
        >>> get_setting("SEED")
        '20210708'
    """
    key = name.upper().removeprefix(SETTING_PREFIX)
    value = os.environ.get(f"{SETTING_PREFIX}{key}")
    if value is not None and value.strip():
        return value.strip()
    if default is not None:
        return default
    return DEFAULT_SETTINGS.get(key)
