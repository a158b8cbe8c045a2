import hashlib
import math
from datetime import date

import pytest
import numpy as np
import pandas as pd

from src.error import NotFoundError, ValidationError
from src.file.operations import digest_files, dumps_json, ensure_directory, file_digest, format_float, read_json, write_frame_csv, write_json


@pytest.mark.unit
@pytest.mark.fast
class TestFormatFloat:
    """Test cases for format_float function."""

    @pytest.mark.parametrize("value, expected", [(0.1, "0.10000000000000001"), (2.0, "2.0"), (-3.0, "-3.0"), (1e22, "1e+22"), (0.5, "0.5")])
    def test_formats(self, value, expected):
        """Test 17 significant digits with a float marker."""
        assert format_float(value) == expected

    @pytest.mark.parametrize("value", [1.0 / 3.0, math.pi, 123456.789, -1e300])
    def test_round_trip(self, value):
        """Test that the text parses back to the same float."""
        assert float(format_float(value)) == value


@pytest.mark.unit
@pytest.mark.fast
class TestJson:
    """Test cases for JSON writing and reading."""

    def test_dumps_deterministic(self):
        """Test sorted keys, 17-digit floats and null for non-finite values."""
        text = dumps_json({"b": 0.1, "a": [1, np.float64(2.0), np.int64(3)], "c": float("nan"), "d": date(2021, 2, 1), "e": np.bool_(True)})

        assert text.index('"a"') < text.index('"b"')
        assert '"b": 0.10000000000000001' in text
        assert '"c": null' in text
        assert '"d": "2021-02-01"' in text
        assert '"e": true' in text
        assert "2.0" in text
        assert text.endswith("\n")

    def test_write_read(self, tmp_path):
        """Test that written JSON reads back with identical floats."""
        obj = {"values": [0.1, 1.0 / 3.0, 1e-12], "name": "run"}
        path = write_json(tmp_path / "nested" / "out.json", obj)

        assert read_json(path) == obj

    def test_read_missing(self, tmp_path):
        """Test NotFoundError for a missing file."""
        with pytest.raises(NotFoundError):
            read_json(tmp_path / "absent.json")

    def test_read_invalid(self, tmp_path):
        """Test ValidationError for malformed JSON."""
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")

        with pytest.raises(ValidationError):
            read_json(path)


@pytest.mark.unit
@pytest.mark.fast
class TestWriteFrameCsv:
    """Test cases for write_frame_csv function."""

    def test_layout(self, tmp_path):
        """Test column order, float format, empty missing cells and LF endings."""
        frame = pd.DataFrame({"b": [0.1, np.nan], "a": ["x", "y"]})
        path = write_frame_csv(tmp_path / "deep" / "frame.csv", frame, columns=["a", "b"])

        assert path.read_bytes() == b"a,b\nx,0.10000000000000001\ny,\n"

    def test_identical_bytes(self, tmp_path):
        """Test that rewriting the same frame gives the same digest."""
        frame = pd.DataFrame({"v": np.linspace(0.0, 1.0, 7)})
        first = write_frame_csv(tmp_path / "a.csv", frame)
        second = write_frame_csv(tmp_path / "b.csv", frame.copy())

        assert file_digest(first) == file_digest(second)


@pytest.mark.unit
@pytest.mark.fast
class TestDigests:
    """Test cases for file digests."""

    def test_sha256(self, tmp_path):
        """Test that the digest is the sha256 of the bytes."""
        path = tmp_path / "data.bin"
        path.write_bytes(b"vaxstrat")

        assert file_digest(path) == hashlib.sha256(b"vaxstrat").hexdigest()
        assert digest_files([path]) == {path.as_posix(): file_digest(path)}

    def test_missing(self, tmp_path):
        """Test NotFoundError for a missing file."""
        with pytest.raises(NotFoundError) as exc_info:
            file_digest(tmp_path / "absent.bin")
        assert exc_info.value.path == (tmp_path / "absent.bin").as_posix()
        assert str(exc_info.value).startswith("[NOT_FOUND]")

    def test_ensure_directory(self, tmp_path):
        """Test that nested directories are created and reused."""
        path = ensure_directory(tmp_path / "a" / "b")

        assert path.is_dir()
        assert ensure_directory(path) == path
