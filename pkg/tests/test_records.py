import json

import numpy as np
import pytest

from app.base import ParseError, ShapeError
from app.utils import (
    REPORT_COLUMNS,
    BoundReport,
    ComplexMatrix,
    PolySpan,
    parse_matrix,
    parse_poly,
    read_reports,
    serialize_matrix,
    write_json,
    write_matrix,
    write_reports,
)


def write_text(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_json_matrix_is_bit_exact(tmp_path, rng):
    entries = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    entries[0, 0] = 0.1 + 1e-300j
    m = ComplexMatrix(entries)
    path = write_text(tmp_path, "m.json", serialize_matrix(m))
    back = parse_matrix(path)
    assert np.array_equal(back.entries, m.entries)
    write_matrix(m, str(tmp_path / "again.json"), {"diagnostics": {"r": 0.5}})
    assert parse_matrix(str(tmp_path / "again.json")) == m


def test_matrix_market_array_is_column_major(tmp_path):
    text = "%%MatrixMarket matrix array complex general\n2 2\n1 0\n3 1\n2 -1\n4 0\n"
    m = parse_matrix(write_text(tmp_path, "m.mtx", text))
    assert np.array_equal(m.entries, np.array([[1, 2 - 1j], [3 + 1j, 4]], dtype=complex))


def test_matrix_market_coordinate(tmp_path):
    text = "%%MatrixMarket matrix coordinate real general\n% comment\n2 2 2\n1 1 0.5\n1 2 1.0\n"
    m = parse_matrix(write_text(tmp_path, "m.mtx", text))
    assert np.array_equal(m.entries, np.array([[0.5, 1.0], [0.0, 0.0]], dtype=complex))


def test_truncated_json_reports_position(tmp_path):
    path = write_text(tmp_path, "bad.json", '{\n"dim": 2,\n"entries": [[1, 0],')
    with pytest.raises(ParseError) as info:
        parse_matrix(path)
    assert info.value.line == 3
    assert info.value.offset > 0
    assert info.value.exit_code == 2


def test_bad_entries(tmp_path):
    with pytest.raises(ShapeError):
        parse_matrix(write_text(tmp_path, "short.json", '{"dim": 2, "entries": [[1, 0]]}'))
    with pytest.raises(ParseError):
        parse_matrix(write_text(tmp_path, "pair.json", '{"dim": 1, "entries": [[1]]}'))
    with pytest.raises(ParseError):
        parse_matrix(write_text(tmp_path, "nan.json", '{"dim": 1, "entries": [[NaN, 0]]}'))
    with pytest.raises(ParseError):
        parse_matrix(write_text(tmp_path, "fields.json", '{"size": 1}'))
    with pytest.raises(ParseError):
        parse_matrix(str(tmp_path / "missing.json"))


def test_non_square_matrix_market(tmp_path):
    text = "%%MatrixMarket matrix array real general\n2 3\n1\n2\n3\n4\n5\n6\n"
    with pytest.raises(ShapeError):
        parse_matrix(write_text(tmp_path, "wide.mtx", text))


def test_parse_poly(tmp_path):
    path = write_text(tmp_path, "p.json", '{"m": 2, "coeffs": [[1, 0], [0, -1]]}')
    p = parse_poly(path)
    assert (p.m, p.n) == (2, 3)
    assert p.coefficient(3) == -1j
    with pytest.raises(ParseError):
        parse_poly(write_text(tmp_path, "q.json", '{"m": -1, "coeffs": [[1, 0]]}'))


REPORTS = [
    BoundReport("thm2", 1.0 / 3.0, 2.0, {"m": 0, "n": 8}),
    BoundReport("lemma2", 5.0, 4.0, {"z": 0.5 + 0.25j}, 1e-9),
]


def test_csv_reports(tmp_path):
    first, second = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    write_reports(REPORTS, first, "csv")
    write_reports(REPORTS, second, "csv")
    with open(first, "rb") as f:
        data = f.read()
    with open(second, "rb") as f:
        assert f.read() == data
    lines = data.decode("utf-8").split("\n")
    assert lines[0] == ",".join(REPORT_COLUMNS)
    assert b"\r" not in data
    rows = read_reports(first)
    assert [r["name"] for r in rows] == ["thm2", "lemma2"]
    assert rows[0]["lhs"] == 1.0 / 3.0
    assert [bool(r["pass"]) for r in rows] == [True, False]
    assert json.loads(rows[1]["inputs"]) == {"z": [0.5, 0.25]}


def test_json_reports(tmp_path):
    path = str(tmp_path / "r.json")
    write_reports(REPORTS, path, "json")
    rows = read_reports(path)
    assert rows[0] == {
        "name": "thm2",
        "lhs": 1.0 / 3.0,
        "rhs": 2.0,
        "margin": 2.0 - 1.0 / 3.0,
        "pass": True,
        "inputs": {"m": 0, "n": 8},
    }
    assert rows[1]["pass"] is False


def test_write_json_is_stable(tmp_path):
    path = str(tmp_path / "x.json")
    write_json({"b": 1, "a": PolySpan.monomial(2).to_json_data()}, path)
    with open(path, encoding="utf-8") as f:
        text = f.read()
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith("\n")
