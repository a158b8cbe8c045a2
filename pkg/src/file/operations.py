"""
File operations for run outputs.

Result files are written deterministically: JSON with sorted keys and floats
rendered with 17 significant digits, CSV with a fixed column order, ``%.17g``
floats and LF line endings. Digests are sha256 over the raw bytes.
"""

from pathlib import Path
import hashlib
import json
import math
import re
from typing import Any, Dict, Iterable, Sequence

import numpy as np
import pandas as pd

from ..error import NotFoundError, ValidationError
from ..log import get_logger, to_json_native

logger = get_logger(__name__)

_FLOAT_MARK = "@f17@"
_FLOAT_PATTERN = re.compile(rf'"{_FLOAT_MARK}([^"]*){_FLOAT_MARK}"')
_CHUNK_SIZE = 1 << 20


def _to_path(path: str | Path) -> Path:
    return path if isinstance(path, Path) else Path(path)


def format_float(value: float) -> str:
    """
    Render a float with 17 significant digits, always with a float marker.

    Args:
        value: Finite float.

    Returns:
        str: "%.17g" text, e.g. 0.1 -> "0.10000000000000001" and 2.0 -> "2.0".
    """
    text = f"{value:.17g}"
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def _mark_floats(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(key): _mark_floats(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_mark_floats(val) for val in obj]
    if isinstance(obj, np.ndarray):
        return _mark_floats(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            return None
        return f"{_FLOAT_MARK}{format_float(value)}{_FLOAT_MARK}"
    return obj


def ensure_directory(path: str | Path) -> Path:
    """
    Create a directory (and parents) if missing.

    Args:
        path: Directory path.

    Returns:
        Path: The directory path.
    """
    path = _to_path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def file_digest(path: str | Path) -> str:
    """
    Compute the sha256 hex digest of a file.

    Args:
        path: File to hash.

    Returns:
        str: Hex digest.

    Raises:
        NotFoundError: If the file does not exist.
    """
    path = _to_path(path)
    if not path.is_file():
        raise NotFoundError(path)

    digest = hashlib.sha256()
    with open(path, "rb") as f_in:
        for chunk in iter(lambda: f_in.read(_CHUNK_SIZE), b""):
            digest.update(chunk)
    return digest.hexdigest()


def digest_files(paths: Iterable[str | Path]) -> Dict[str, str]:
    """Map each path (posix string) to its sha256 digest."""
    return {_to_path(path).as_posix(): file_digest(path) for path in paths}


def dumps_json(obj: Any) -> str:
    """
    Serialise an object to deterministic JSON text.

    Non-finite floats become null; numpy, date and pydantic values are
    converted to JSON-native values.

    Args:
        obj: JSON-like object.

    Returns:
        str: JSON text ending with a newline.
    """
    text = json.dumps(_mark_floats(obj), sort_keys=True, indent=2, default=lambda o: _mark_floats(to_json_native(o)), allow_nan=False)
    return _FLOAT_PATTERN.sub(r"\1", text) + "\n"


def write_json(path: str | Path, obj: Any) -> Path:
    """
    Write an object as deterministic JSON.

    Args:
        path: Destination file; parent directories are created.
        obj: JSON-like object.

    Returns:
        Path: The written path.
    """
    path = _to_path(path)
    ensure_directory(path.parent)
    with open(path, "w", encoding="utf-8", newline="\n") as f_out:
        f_out.write(dumps_json(obj))
    logger.debug("JSON written", extra={"file": path.as_posix()})
    return path


def read_json(path: str | Path) -> Any:
    """
    Read a JSON file.

    Raises:
        NotFoundError: If the file does not exist.
        ValidationError: If the file is not valid JSON.
    """
    path = _to_path(path)
    if not path.is_file():
        raise NotFoundError(path)
    try:
        with open(path, encoding="utf-8") as f_in:
            return json.load(f_in)
    except json.JSONDecodeError as e:
        raise ValidationError(f"Invalid JSON in '{path.as_posix()}': {e}")


def write_frame_csv(path: str | Path, frame: pd.DataFrame, columns: Sequence[str] | None = None) -> Path:
    """
    Write a DataFrame as deterministic CSV.

    Args:
        path: Destination file; parent directories are created.
        frame: Data to write. The index is not written.
        columns: Optional fixed column order.

    Returns:
        Path: The written path.
    """
    path = _to_path(path)
    ensure_directory(path.parent)
    frame.to_csv(path, index=False, columns=list(columns) if columns is not None else None, float_format="%.17g", lineterminator="\n", encoding="utf-8", na_rep="")
    logger.debug("CSV written", extra={"file": path.as_posix(), "rows": len(frame)})
    return path
