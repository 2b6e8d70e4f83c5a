from __future__ import annotations

import math
import os

import pytest

from majda_znd import P0, emit_report, verify_condition_D
from majda_znd.reports import atomic_write, canonical_json, csv_text, sha256_file


def test_canonical_json_is_sorted_and_fixed_format():
    text = canonical_json({"b": 0.1, "a": [1, math.nan, 2j], "c": None})
    assert text == '{"a":[1,null,[0,2]],"b":0.10000000000000001,"c":null}\n'


def test_csv_quotes_and_formats():
    text = csv_text(("x", "note"), [(0.5, "a, b"), (math.inf, None)])
    assert text == 'x,note\n0.5,"a, b"\nnan,\n'


def test_report_is_byte_identical(tmp_path):
    report = verify_condition_D(P0)
    a = emit_report(report, tmp_path / "a.json")
    b = emit_report(verify_condition_D(P0), tmp_path / "b.json")
    assert a.read_bytes() == b.read_bytes()
    assert sha256_file(a) == sha256_file(b)


def test_inconclusive_report_lists_diagnostics(tmp_path):
    report = verify_condition_D(P0, indent_r=10.0)
    text = emit_report(report, tmp_path / "r.json").read_text()
    assert '"diagnostics":["GeometryError' in text
    assert '"verdict":"Inconclusive"' in text


def test_failed_write_leaves_nothing(tmp_path, monkeypatch):
    target = tmp_path / "out.json"

    def boom(src, dst):
        raise OSError("disk full")

    monkeypatch.setattr(os, "replace", boom)
    with pytest.raises(OSError):
        atomic_write(target, "data")
    assert list(tmp_path.iterdir()) == []
