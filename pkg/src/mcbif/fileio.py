"""Label-matrix sequence files and atomic output helpers.

A sequence file is UTF-8 CSV. An optional first line ``# t1,t2,...,tM`` gives the
change points (default ``0 .. M-1``). Each following row belongs to one element and
holds its cluster label in every layer; labels are arbitrary tokens interned per
column, so the same token in two columns means nothing.
"""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from pathlib import Path

from .core import PartitionError, PartitionSequence


class SequenceFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


def parse_sequence(text: str) -> PartitionSequence:
    lines = text.splitlines()
    header = None
    rows: list[tuple[int, list[str]]] = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if line.lstrip().startswith("#"):
            if header is not None or rows:
                raise SequenceFileError("the change-point header must be the first line", lineno)
            header = _parse_header(line.lstrip()[1:], lineno)
            continue
        row = next(csv.reader([line]))
        rows.append((lineno, [tok.strip() for tok in row]))
    if not rows:
        raise SequenceFileError("no element rows found")
    width = len(rows[0][1])
    for lineno, row in rows:
        if len(row) != width:
            raise SequenceFileError(f"expected {width} labels, found {len(row)}", lineno)
        for col, tok in enumerate(row, start=1):
            if tok == "":
                raise SequenceFileError("empty cluster label", lineno, col)
    if header is not None and len(header) != width:
        raise SequenceFileError(f"header has {len(header)} change points for {width} layers", 1)
    columns = [[row[c] for _, row in rows] for c in range(width)]
    try:
        return PartitionSequence.from_label_columns(columns, header)
    except PartitionError as exc:
        raise SequenceFileError(str(exc)) from exc


def _parse_header(body: str, lineno: int) -> list[float]:
    values = []
    for col, tok in enumerate(body.split(","), start=1):
        try:
            v = float(tok.strip())
        except ValueError:
            raise SequenceFileError(f"change point {tok.strip()!r} is not a number", lineno, col) from None
        if not math.isfinite(v):
            raise SequenceFileError("change points must be finite", lineno, col)
        if values and v <= values[-1]:
            raise SequenceFileError("change points must be strictly increasing", lineno, col)
        values.append(v)
    return values


def read_sequence(path: str | os.PathLike) -> PartitionSequence:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise SequenceFileError(f"not UTF-8 text: {exc}") from exc
    return parse_sequence(text)


def format_sequence(seq: PartitionSequence) -> str:
    """Serialise with canonical labels (block indices) and an explicit header."""
    buf = io.StringIO()
    buf.write("# " + ",".join(repr(t) for t in seq.change_points) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    for row in seq.label_matrix.T.tolist():
        writer.writerow(row)
    return buf.getvalue()


def write_text_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_sequence(path: str | os.PathLike, seq: PartitionSequence) -> None:
    write_text_atomic(path, format_sequence(seq))


def format_grid(grid) -> str:
    """``i,j,value`` rows with 1-based layer indices."""
    lines = ["i,j,value"]
    lines.extend(f"{i + 1},{j + 1},{v}" for i, j, v in grid.entries())
    return "\n".join(lines) + "\n"


def format_matrix(values, labels) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + list(labels))
    for lab, row in zip(labels, values):
        writer.writerow([lab] + [repr(float(x)) for x in row])
    return buf.getvalue()
