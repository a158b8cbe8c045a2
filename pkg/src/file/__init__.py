"""
Custom file module.
Imports and exports deterministic writers, readers and digests.
"""

from .operations import ensure_directory, file_digest, digest_files, dumps_json, write_json, read_json, write_frame_csv, format_float

__all__ = [
    "ensure_directory",
    "file_digest",
    "digest_files",
    "dumps_json",
    "write_json",
    "read_json",
    "write_frame_csv",
    "format_float",
]
