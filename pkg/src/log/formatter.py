"""
JSON formatter for structured logging.

Log records are rendered as one JSON object per line. Fields attached with
``extra=`` (country, outcome, order, draws, ...) are carried through, and the
numeric payloads the estimators log (numpy scalars and arrays, dates, pydantic
models) are converted to JSON-native values.
"""

import datetime as dt
import json
import logging
from typing import Any, Dict

try:
    from typing import override
except ImportError:  # Python < 3.12
    from typing_extensions import override

import numpy as np

LOG_RECORD_BUILTIN_ATTRS = {
    "args",
    "asctime",
    "created",
    "exc_info",
    "exc_text",
    "filename",
    "funcName",
    "levelname",
    "levelno",
    "lineno",
    "module",
    "msecs",
    "message",
    "msg",
    "name",
    "pathname",
    "process",
    "processName",
    "relativeCreated",
    "stack_info",
    "thread",
    "threadName",
    "taskName",
}


def to_json_native(value: Any) -> Any:
    """
    Convert values produced by the numeric stack into JSON-serialisable ones.

    Args:
        value: Any object passed to ``json.dumps`` as ``default``.

    Returns:
        A JSON-native equivalent; falls back to ``str(value)``.
    """
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (dt.date, dt.datetime)):
        return value.isoformat()
    if hasattr(value, "model_dump"):
        return value.model_dump(mode="json")
    return str(value)


class JSONFormatter(logging.Formatter):
    """
    JSON formatter for logging records.

    Attributes:
        fmt_keys: Mapping of output JSON keys to LogRecord attribute names.
    """

    def __init__(self, *, fmt_keys: dict[str, str] | None = None) -> None:
        """
        Initialize the JSON formatter.

        Args:
            fmt_keys: Optional mapping of output keys to LogRecord attributes,
                e.g. {"level": "levelname", "logger": "name"}.
        """
        super().__init__()
        self.fmt_keys = fmt_keys if fmt_keys is not None else {}

    @override
    def format(self, record: logging.LogRecord) -> str:
        return json.dumps(self._prepare_log_dict(record), default=to_json_native)

    def _prepare_log_dict(self, record: logging.LogRecord) -> Dict[str, Any]:
        always_fields = {
            "message": record.getMessage(),
            "timestamp": dt.datetime.fromtimestamp(record.created, tz=dt.timezone.utc).isoformat(),
        }
        if record.exc_info is not None:
            always_fields["exc_info"] = self.formatException(record.exc_info)

        if record.stack_info is not None:
            always_fields["stack_info"] = self.formatStack(record.stack_info)

        message = {
            key: msg_val
            if (msg_val := always_fields.pop(val, None)) is not None
            else getattr(record, val)
            for key, val in self.fmt_keys.items()
        }
        message.update(always_fields)

        # extra= fields
        for key, val in record.__dict__.items():
            if key not in LOG_RECORD_BUILTIN_ATTRS:
                message[key] = val

        return message
