"""Matrix files and CSV helpers.

Matrix format: first line ``rows cols q``, then ``rows`` lines of ``cols``
decimal integers in [0, q), single spaces, LF endings, trailing newline.
"""

from __future__ import annotations

import csv
import io

from .errors import InvalidModulus
from .field import FieldMatrix, PrimeField


class MatrixFormatError(ValueError):
    pass


def parse_matrix(text: str) -> FieldMatrix:
    if not text.endswith("\n"):
        raise MatrixFormatError("matrix file must end with a newline")
    lines = text[:-1].split("\n")
    head = lines[0].split()
    if len(head) != 3 or not all(h.isdigit() for h in head):
        raise MatrixFormatError(f"bad header line {lines[0]!r}; expected 'rows cols q'")
    rows, cols, q = map(int, head)
    if rows < 1 or cols < 1:
        raise MatrixFormatError("rows and cols must be positive")
    try:
        field = PrimeField(q)
    except InvalidModulus as exc:
        raise MatrixFormatError(str(exc)) from exc
    body = lines[1:]
    if len(body) != rows:
        raise MatrixFormatError(f"header says {rows} rows, found {len(body)}")
    data = []
    for i, line in enumerate(body):
        toks = line.split()
        if len(toks) != cols or not all(t.isdigit() for t in toks):
            raise MatrixFormatError(f"row {i + 1}: expected {cols} nonnegative integers")
        vals = [int(t) for t in toks]
        if any(v >= q for v in vals):
            raise MatrixFormatError(f"row {i + 1}: entry outside [0, {q})")
        data.append(vals)
    return FieldMatrix(field, data)


def format_matrix(m: FieldMatrix) -> str:
    out = [f"{m.rows} {m.cols} {m.field.q}"]
    out += [" ".join(str(v) for v in row) for row in m.tolist()]
    return "\n".join(out) + "\n"


def read_matrix(path) -> FieldMatrix:
    with open(path, newline="") as fh:
        return parse_matrix(fh.read())


def write_matrix(path, m: FieldMatrix):
    with open(path, "w", newline="") as fh:
        fh.write(format_matrix(m))


def read_csv(text: str) -> tuple[list[str], list[list[str]]]:
    """Parse CSV output of this package: ``#`` lines are comments and the
    first remaining line is the header."""
    lines = [ln for ln in text.split("\n") if ln and not ln.startswith("#")]
    rows = list(csv.reader(io.StringIO("\n".join(lines))))
    if not rows:
        raise ValueError("CSV has no header row")
    return rows[0], rows[1:]
