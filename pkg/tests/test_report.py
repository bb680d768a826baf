import json
import math

import numpy as np
import pytest

from zakframe import RunReport
from zakframe.errors import ConfigError
from zakframe.report import SCHEMA_VERSION
from zakframe.state import dumps, load_report, read_columns, save_report, to_jsonable, write_csv


def test_to_jsonable():
    data = {"inf": math.inf, "nan": float("nan"), "np": np.float64(0.25), "i": np.int64(3),
            "z": 1 + 2j, "t": (1, 2), 4: "key"}
    out = to_jsonable(data)
    assert out["inf"] == "inf" and out["nan"] == "nan"
    assert out["np"] == 0.25 and isinstance(out["i"], int)
    assert out["z"] == {"re": 1.0, "im": 2.0}
    assert out["t"] == [1, 2]
    assert out["4"] == "key"


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": 2}) == dumps({"a": 2, "b": 1})
    assert dumps({"x": -math.inf}).strip() == '{\n  "x": "-inf"\n}'


def test_report_round_trip(tmp_path):
    r = RunReport(command="zak", inputs={"window": "gaussian"}, outputs={"value": 1.5})
    r.warn("careful")
    r.warn("careful")
    assert r.warnings == ["careful"]
    path = r.save(tmp_path / "sub" / "report.json")
    back = RunReport.load(path)
    assert back.to_dict() == r.to_dict()
    assert back.schema_version == SCHEMA_VERSION


def test_canonical_body_ignores_timestamp():
    a = RunReport(command="zak", outputs={"v": 1}, timestamp="2020-01-01T00:00:00+00:00")
    b = RunReport(command="zak", outputs={"v": 1}, timestamp="2030-01-01T00:00:00+00:00")
    assert a.to_json() != b.to_json()
    assert a.canonical_body() == b.canonical_body()


def test_report_errors(tmp_path):
    with pytest.raises(ConfigError):
        RunReport.load(tmp_path / "missing.json")
    with pytest.raises(ConfigError):
        RunReport.from_json("{not json")
    with pytest.raises(ConfigError):
        RunReport.from_dict({"schema_version": "0"})
    with pytest.raises(ConfigError):
        RunReport.from_dict({"schema_version": SCHEMA_VERSION, "command": "zak"})


def test_save_report_replaces_atomically(tmp_path):
    p = tmp_path / "r.json"
    save_report({"a": 1}, p)
    save_report({"a": 2}, p)
    assert json.loads(p.read_text()) == {"a": 2}
    assert not (tmp_path / "r.json.tmp").exists()


def test_load_report_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_report(bad)
    with pytest.raises(ConfigError, match="not found"):
        load_report(tmp_path / "nope.json")
    save_report({"x": [1, 2]}, tmp_path / "ok.json")
    assert load_report(tmp_path / "ok.json") == {"x": [1, 2]}


def test_csv_round_trip(tmp_path):
    p = write_csv(tmp_path / "t.csv", ["x", "y"], [[1, 2], [3, 4]])
    rows = read_columns(p)
    assert rows == [["x", "y"], ["1", "2"], ["3", "4"]]


def test_read_columns_skips_comments(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("# header\n\n1.5  2\n3,4\n", encoding="utf-8")
    assert read_columns(p) == [["1.5", "2"], ["3", "4"]]
