from .logger import get_logger, setup_logging, is_logging_configured
from .formatter import JSONFormatter, to_json_native

__all__ = [
    "get_logger",
    "setup_logging",
    "is_logging_configured",
    "JSONFormatter",
    "to_json_native",
]
