#  MIT License
#
#  Copyright (c) 2020 Daniel C. Brotsky
#
#  Permission is hereby granted, free of charge, to any person obtaining a copy
#  of this software and associated documentation files (the "Software"), to deal
#  in the Software without restriction, including without limitation the rights
#  to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
#  copies of the Software, and to permit persons to whom the Software is
#  furnished to do so, subject to the following conditions:
#
#  The above copyright notice and this permission notice shall be included in all
#  copies or substantial portions of the Software.
#
#  THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
#  IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
#  FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
#  AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
#  LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
#  OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
#  SOFTWARE.
import io
import json
from typing import Any, Dict, List, Sequence

import numpy as np
import pandas as pd
import scipy.io

from .formats import BoundReport, ComplexMatrix, PolySpan
from ..base import BadParameters, ParseError, ShapeError, prinlv

REPORT_COLUMNS = ["name", "lhs", "rhs", "margin", "pass", "inputs"]


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise ParseError(f"Can't read '{path}': {e.strerror}")


def _line_of(text: str, offset: int) -> int:
    return text.count("\n", 0, offset) + 1


def matrix_from_json_data(data: Any) -> ComplexMatrix:
    """
    Build a matrix from {"dim": d, "entries": [[re, im], ...]} with the
    d*d entries in row-major order.
    """
    if not isinstance(data, dict) or "dim" not in data or "entries" not in data:
        raise ParseError("Matrix JSON needs 'dim' and 'entries' fields")
    dim, entries = data["dim"], data["entries"]
    if not isinstance(dim, int) or dim <= 0:
        raise ShapeError(f"Matrix dimension must be a positive integer, got {dim!r}")
    if not isinstance(entries, list) or len(entries) != dim * dim:
        count = len(entries) if isinstance(entries, list) else 0
        raise ShapeError(f"Expected {dim * dim} entries for dim {dim}, got {count}")
    values = np.empty(dim * dim, dtype=np.complex128)
    for i, pair in enumerate(entries):
        try:
            re, im = pair
            values[i] = complex(float(re), float(im))
        except (TypeError, ValueError):
            raise ParseError(f"Entry {i} is not a [re, im] pair: {pair!r}")
    try:
        return ComplexMatrix(values.reshape(dim, dim))
    except BadParameters as e:
        raise ParseError(str(e))


def _parse_json_matrix(text: str) -> ComplexMatrix:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid matrix JSON: {e.msg}", line=e.lineno, offset=e.pos)
    return matrix_from_json_data(data)


def _parse_matrix_market(text: str) -> ComplexMatrix:
    banner = text.split("\n", 1)[0].lower().split()
    if len(banner) < 4 or banner[1] != "matrix" or banner[2] not in ("array", "coordinate"):
        raise ParseError("Unrecognized Matrix Market banner", line=1, offset=0)
    try:
        data = scipy.io.mmread(io.BytesIO(text.encode("utf-8")))
    except (ValueError, IndexError, EOFError) as e:
        # mmread reads to the end before failing on short data
        raise ParseError(
            f"Malformed Matrix Market data: {e}", line=_line_of(text, len(text)), offset=len(text)
        )
    a = data.toarray() if hasattr(data, "toarray") else np.asarray(data)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"Matrix must be square, got shape {a.shape}")
    try:
        return ComplexMatrix(a)
    except BadParameters as e:
        raise ParseError(str(e))


def parse_matrix(path: str) -> ComplexMatrix:
    """
    Read a matrix file: JSON as written by `serialize_matrix`, or
    Matrix Market (array or coordinate) with a complex or real field.
    """
    text = _read_text(path)
    if text.lstrip().startswith("%%MatrixMarket"):
        matrix = _parse_matrix_market(text.lstrip())
    else:
        matrix = _parse_json_matrix(text)
    prinlv(f"Read {matrix.dim}x{matrix.dim} matrix from '{path}'.")
    return matrix


def matrix_to_json_data(m: ComplexMatrix) -> Dict[str, Any]:
    flat = m.entries.reshape(-1)
    return {
        "dim": m.dim,
        "entries": [[float(v.real), float(v.imag)] for v in flat],
    }


def serialize_matrix(m: ComplexMatrix) -> str:
    """JSON text whose floats read back to the identical binary64 values."""
    return json.dumps(matrix_to_json_data(m), separators=(",", ":"))


def write_matrix(m: ComplexMatrix, path: str, extra: Dict[str, Any] = None):
    data = matrix_to_json_data(m)
    if extra:
        data.update(extra)
    write_json(data, path)


def parse_poly(path: str) -> PolySpan:
    """Read {"m": m, "coeffs": [[re, im], ...]}."""
    text = _read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid polynomial JSON: {e.msg}", line=e.lineno, offset=e.pos)
    try:
        return PolySpan.from_json_data(data)
    except BadParameters as e:
        raise ParseError(str(e))


def write_json(data: Any, path: str):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")


def reports_frame(reports: Sequence[BoundReport]) -> pd.DataFrame:
    rows = [
        {
            "name": r.name,
            "lhs": r.lhs,
            "rhs": r.rhs,
            "margin": r.margin,
            "pass": r.passed,
            "inputs": r.inputs_json(),
        }
        for r in reports
    ]
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def write_reports(reports: Sequence[BoundReport], path: str, fmt: str = "json"):
    """
    One row (CSV) or object (JSON) per report, in the given order.
    CSV floats carry 17 significant digits.
    """
    if fmt == "csv":
        reports_frame(reports).to_csv(
            path, index=False, float_format="%.17g", lineterminator="\n"
        )
    elif fmt == "json":
        write_json({"reports": [r.to_json_data() for r in reports]}, path)
    else:
        raise BadParameters(f"Unknown report format: {fmt}")
    prinlv(f"Wrote {len(reports)} report(s) to '{path}' as {fmt}.")


def read_reports(path: str) -> List[Dict[str, Any]]:
    """The rows of a CSV or JSON report file as dicts."""
    if path.endswith(".csv"):
        return pd.read_csv(path, dtype={"inputs": str}).to_dict("records")
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)["reports"]
