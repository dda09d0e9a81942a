"""Serialization: schema headers, deterministic bytes, config recovery."""

import json

import numpy as np
import pytest

from pcffwm import io


META = io.metadata("dispersion", {"pitch": 1.39, "ratio": 0.55, "out": "x.csv"})


def test_metadata_fields():
    assert META["schema_version"] == io.SCHEMA_VERSION
    assert META["command"] == "dispersion"
    from pcffwm import __version__

    assert META["tool_version"] == __version__


def test_csv_header_and_rows(tmp_path):
    path = tmp_path / "out.csv"
    io.write_csv(path, ["a", "b"], [(1.5, True), (2.5, False)], META)
    lines = path.read_text().splitlines()
    assert lines[0] == f"# schema_version={io.SCHEMA_VERSION}"
    assert lines[2] == "# command=dispersion"
    assert lines[4] == "a,b"
    assert lines[5] == "1.5,1"
    assert lines[6] == "2.5,0"


def test_csv_none_serializes_empty(tmp_path):
    path = tmp_path / "out.csv"
    io.write_csv(path, ["a", "b"], [(None, 1.0)], META)
    assert path.read_text().splitlines()[-1] == ",1.0"


def test_float_format_round_trips():
    x = 0.1 + 0.2
    assert float(io._fmt(x)) == x
    assert float(io._fmt(np.float64(1.0) / 3.0)) == 1.0 / 3.0


def test_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    rows = [(1.2345678901234567, 0.5)]
    io.write_csv(a, ["x", "y"], rows, META)
    io.write_csv(b, ["x", "y"], rows, META)
    assert a.read_bytes() == b.read_bytes()


def test_json_document(tmp_path):
    path = tmp_path / "out.json"
    io.write_json(path, {"values": np.array([1.0, np.nan])}, META)
    doc = json.loads(path.read_text())
    assert doc["schema_version"] == io.SCHEMA_VERSION
    assert doc["config"]["pitch"] == 1.39
    assert doc["data"]["values"] == [1.0, None]  # NaN must not leak into JSON


def test_read_config_header_csv(tmp_path):
    path = tmp_path / "out.csv"
    io.write_csv(path, ["a"], [(1.0,)], META)
    assert io.read_config_header(path) == META["config"]


def test_read_config_header_json(tmp_path):
    path = tmp_path / "out.json"
    io.write_json(path, {"x": 1}, META)
    assert io.read_config_header(path) == META["config"]


def test_read_config_header_missing(tmp_path):
    path = tmp_path / "plain.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        io.read_config_header(path)
