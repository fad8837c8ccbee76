"""Serialization round-trips and reproducibility of emitted files."""

import math

import pytest

from asnr_lab.tables import (
    ResultTable,
    VOLATILE_META_KEYS,
    emit_table,
    from_csv,
    from_json,
    parse_table,
    to_csv,
    to_json,
)

AWKWARD_FLOATS = [0.1 + 0.2, 1e-17, -3.5, 123456789.123456789, 2.0**-52,
                  float("nan")]


def _sample_table():
    rows = [["gaussian", 50, f] for f in AWKWARD_FLOATS]
    rows.append(["with,comma", None, 1.0])
    return ResultTable(name="demo", columns=["family", "width", "value"],
                       rows=rows,
                       meta={"schema": "demo", "seed": 42,
                             "config": {"n_mc": 10, "eta": 0.5}})


def _cells_equal(a, b):
    if isinstance(a, float) and isinstance(b, float):
        return (math.isnan(a) and math.isnan(b)) or a == b
    return a == b


def _tables_equal(a, b):
    assert a.columns == b.columns
    assert len(a.rows) == len(b.rows)
    for ra, rb in zip(a.rows, b.rows):
        for ca, cb in zip(ra, rb):
            assert _cells_equal(ca, cb), (ca, cb)


def test_csv_round_trip_is_exact():
    table = _sample_table()
    _tables_equal(table, from_csv(to_csv(table)))


def test_json_round_trip_is_exact():
    table = _sample_table()
    # JSON cannot carry NaN portably; the report layer emits None instead
    table.rows = [r for r in table.rows
                  if not (isinstance(r[2], float) and math.isnan(r[2]))]
    _tables_equal(table, from_json(to_json(table)))


def test_csv_meta_round_trip():
    parsed = from_csv(to_csv(_sample_table()))
    assert parsed.meta["schema"] == "demo"
    assert parsed.meta["config"] == {"n_mc": 10, "eta": 0.5}


def test_csv_quotes_embedded_commas():
    text = to_csv(_sample_table())
    assert '"with,comma"' in text


def test_emit_and_parse_files(tmp_path):
    table = _sample_table()
    for fmt in ("csv", "json"):
        if fmt == "json":
            table.rows = [r for r in table.rows
                          if not (isinstance(r[2], float)
                                  and math.isnan(r[2]))]
        path = emit_table(table, fmt, tmp_path / f"t.{fmt}")
        _tables_equal(table, parse_table(path))
    with pytest.raises(ValueError):
        emit_table(table, "xml", tmp_path / "t.xml")


def test_emit_reports_path_on_failure(tmp_path):
    target = tmp_path / "f"
    target.write_text("")
    with pytest.raises(OSError, match="f/sub"):
        emit_table(_sample_table(), "csv", target / "sub" / "t.csv")


def test_volatile_meta_keys_are_documented():
    assert "created_at" in VOLATILE_META_KEYS
    assert "wall_time_s" in VOLATILE_META_KEYS
