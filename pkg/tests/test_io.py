import json
import os
from fractions import Fraction

import pytest

from qsphere import io
from qsphere.rational import Q


@pytest.mark.parametrize("value,text", [
    (True, "true"),
    (3, "3"),
    (Q(5, 8), "5/8"),
    (Q(4, 2), "2/1"),
    (0.1, "0.10000000000000001"),
    ("band", "band"),
])
def test_fmt(value, text):
    assert io.fmt(value) == text


def test_fmt_fraction():
    assert io.fmt(Fraction(-1, 3)) == "-1/3"


def test_csv_text_stable():
    text = io.csv_text(("a", "b"), [(1, Q(1, 2)), (2, 0.25)])
    assert text == "a,b\n1,1/2\n2,0.25\n"


def test_json_text_sorted_and_stringified_keys():
    text = io.json_text({"b": 1, "a": {(1, 2): Q(1, 3)}})
    assert json.loads(text) == {"a": {"(1, 2)": "1/3"}, "b": 1}
    assert text.index('"a"') < text.index('"b"')


def test_atomic_write_replaces_and_leaves_no_temp(tmp_path):
    target = tmp_path / "sub" / "t.csv"
    io.atomic_write_text(target, "old\n")
    io.atomic_write_text(target, "new\n")
    assert target.read_text() == "new\n"
    assert os.listdir(target.parent) == ["t.csv"]


def test_atomic_write_failure_keeps_old_file(tmp_path):
    target = tmp_path / "t.txt"
    target.write_text("keep")
    with pytest.raises(TypeError):
        io.atomic_write_text(target, None)
    assert target.read_text() == "keep"
    assert os.listdir(tmp_path) == ["t.txt"]


def test_manifest_schema():
    jsonschema = pytest.importorskip("jsonschema")
    m = io.manifest(2, 0, 100, {"r": (0.1, 0.2)})
    jsonschema.validate(json.loads(io.json_text(m)), io.load_schema("manifest"))
    assert m["versions"]["kernels"] in ("cython", "python")
