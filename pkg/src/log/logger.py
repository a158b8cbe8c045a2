"""
Logging configuration module.

Configures the process-wide logging tree once from a bundled dictConfig JSON
file. The CLI calls ``setup_logging`` with the directory and format resolved
from the environment; library modules only call ``get_logger(__name__)``.
"""

from pathlib import Path
import json
import logging.config
import threading
from typing import Literal, get_args

_logging_configured = False
_config_lock = threading.Lock()

CONFIG_FILE_TYPE = Literal["detailed", "json"]
_valid_config_types = get_args(CONFIG_FILE_TYPE)

LOG_LEVEL = Literal["DEBUG", "INFO", "WARNING", "ERROR"]
_valid_levels = get_args(LOG_LEVEL)


def _setup_logging(type_file_logging: CONFIG_FILE_TYPE, name_file_log: str = "vaxstrat", path_dir_logs: str | Path | None = None, level: LOG_LEVEL = "INFO") -> None:
    """
    Configure logging using a bundled JSON configuration file.

    Thread-safe; only the first call has an effect.

    Args:
        type_file_logging: Configuration flavour ("json" or "detailed").
        name_file_log: Base name of the log file without extension.
        path_dir_logs: Directory for log files. Defaults to "./logs".
        level: Threshold of the stderr handler. The file handler always logs DEBUG.

    Raises:
        ValueError: If an argument is invalid or the bundled config is malformed.
        FileNotFoundError: If the bundled configuration file is missing.
        OSError: If the log directory cannot be created.
    """
    if type_file_logging not in _valid_config_types:
        raise ValueError(f"Invalid type_file_logging: {type_file_logging}. Must be one of {_valid_config_types}")

    if level not in _valid_levels:
        raise ValueError(f"Invalid level: {level}. Must be one of {_valid_levels}")

    if not name_file_log or not name_file_log.strip():
        raise ValueError("name_file_log cannot be empty")

    global _logging_configured

    with _config_lock:
        if _logging_configured:
            return

        config_file = Path(__file__).parent / f"config_{type_file_logging}.json"
        if not config_file.exists():
            raise FileNotFoundError(f"Logging config not found at: {config_file}")

        try:
            with open(config_file, encoding="utf-8") as f_in:
                config = json.load(f_in)
        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid JSON in logging config '{config_file}': {e}")

        missing_keys = [key for key in ("formatters", "handlers") if key not in config]
        if missing_keys:
            raise ValueError(f"Missing required keys in config: {missing_keys}")

        if "file" not in config["handlers"] or "stderr" not in config["handlers"]:
            raise ValueError("Config must define 'stderr' and 'file' handlers")

        if type_file_logging == "json":
            if "json" not in config["formatters"]:
                raise ValueError("JSON formatter requested but 'json' formatter not found in config")
            module_name = __name__.rsplit(".", 1)[0]
            config["formatters"]["json"]["()"] = f"{module_name}.formatter.JSONFormatter"

        path_logs = Path(path_dir_logs) if path_dir_logs else Path(".") / "logs"
        try:
            path_logs.mkdir(exist_ok=True, parents=True)
        except OSError as e:
            raise OSError(f"Failed to create log directory '{path_logs}': {e}")

        file_extension = ".log.jsonl" if type_file_logging == "json" else ".log"
        config["handlers"]["file"]["filename"] = (path_logs / f"{name_file_log.strip()}{file_extension}").as_posix()
        config["handlers"]["stderr"]["level"] = level

        try:
            logging.config.dictConfig(config)
        except Exception as e:
            raise ValueError(f"Failed to apply logging configuration: {e}")

        # numerical libraries are chatty at DEBUG
        for noisy in ("matplotlib", "PIL", "numexpr"):
            logging.getLogger(noisy).setLevel(logging.WARNING)

        _logging_configured = True


def setup_logging(type_file_logging: CONFIG_FILE_TYPE, name_file_log: str = "vaxstrat", path_dir_logs: str | Path | None = None, level: LOG_LEVEL = "INFO") -> None:
    """
    Configure application logging.

    Args:
        type_file_logging: Configuration flavour ("json" or "detailed").
        name_file_log: Base name of the log file without extension.
        path_dir_logs: Directory for log files.
        level: Threshold of the stderr handler.

    Raises:
        RuntimeError: If logging has already been configured.
    """
    if _logging_configured:
        raise RuntimeError("Logging has already been configured. Cannot reconfigure.")

    _setup_logging(type_file_logging=type_file_logging, name_file_log=name_file_log, path_dir_logs=path_dir_logs, level=level)


def is_logging_configured() -> bool:
    """Return True once the logging tree has been configured."""
    return _logging_configured


def get_logger(name: str) -> logging.Logger:
    """
    Get a named logger.

    Never configures handlers: importing a module that logs has no side
    effects. Until ``setup_logging`` runs, records at WARNING and above reach
    stderr through the logging module's last-resort handler.

    Args:
        name: Logger name, typically ``__name__``.

    Returns:
        Logger instance.

    Raises:
        TypeError: If name is not a string.
        ValueError: If name is empty.

    Example:
        >>> logger = get_logger(__name__)
        >>> logger.info("Panel assembled", extra={"countries": 37})
    """
    if not isinstance(name, str):
        raise TypeError("Logger 'name' must be a string")

    name = name.strip()
    if not name:
        raise ValueError("Logger 'name' cannot be empty")

    return logging.getLogger(name)
