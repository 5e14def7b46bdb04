"""Immutable typed columnar tables with CSV parsing and serialization.

A :class:`Table` is the unit every exploration operation works on: an
ordered collection of named, typed columns of equal length, with an
explicit missing marker (``None``).  Supported dtypes are ``integer``,
``real``, ``boolean``, ``text`` and ``date`` (ISO year-month-day).

CSV parsing infers each column's dtype by the cascade
integer -> real -> boolean -> date -> text: a column gets type T iff every
non-missing cell parses as T.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from datetime import date

from .errors import (
    EmptyInputError,
    EncodingError,
    InvalidHeaderError,
    RaggedRowsError,
    UnknownColumnError,
)

DTYPES = ("integer", "real", "boolean", "text", "date")

DEFAULT_NA_TOKENS = frozenset({"", "NA", "NaN"})

_INT_RE = re.compile(r"^[+-]?\d+$")
_REAL_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")
_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_BOOL_TOKENS = {"true": True, "false": False, "TRUE": True, "FALSE": False}

Cell = object  # int | float | bool | str | date | None


@dataclass(frozen=True)
class Column:
    """A named, typed sequence of cells; ``None`` marks a missing value."""

    name: str
    dtype: str
    cells: tuple

    def __post_init__(self):
        if self.dtype not in DTYPES:
            raise ValueError(f"unknown dtype {self.dtype!r}")
        if not self.name:
            raise ValueError("column name must be non-empty")
        py = {"integer": int, "real": float, "boolean": bool, "text": str,
              "date": date}[self.dtype]
        for c in self.cells:
            if c is None:
                continue
            if not isinstance(c, py) or (py is int and isinstance(c, bool)):
                raise TypeError(
                    f"cell {c!r} is not of dtype {self.dtype} in column "
                    f"{self.name!r}"
                )

    @property
    def n_missing(self) -> int:
        return sum(1 for c in self.cells if c is None)

    def non_missing(self) -> list:
        return [c for c in self.cells if c is not None]

    @property
    def is_numeric(self) -> bool:
        return self.dtype in ("integer", "real")


@dataclass(frozen=True)
class Table:
    """Immutable table: equal-length columns with unique non-empty names."""

    name: str
    columns: tuple
    n_rows: int = field(default=-1)

    def __post_init__(self):
        lengths = {len(c.cells) for c in self.columns}
        if len(lengths) > 1:
            raise ValueError("columns have unequal lengths")
        n = lengths.pop() if lengths else 0
        if self.n_rows == -1:
            object.__setattr__(self, "n_rows", n)
        elif self.n_rows != n:
            raise ValueError("n_rows does not match column length")
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ValueError("duplicate column names")

    @property
    def column_names(self) -> list:
        return [c.name for c in self.columns]

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise UnknownColumnError(name)

    def row(self, i: int) -> list:
        return [c.cells[i] for c in self.columns]

    def rows(self) -> list:
        return [self.row(i) for i in range(self.n_rows)]


@dataclass(frozen=True)
class ColumnInfo:
    name: str
    dtype: str
    n_missing: int
    n_distinct: int


@dataclass(frozen=True)
class Schema:
    """Per-column name, dtype, missing and distinct counts."""

    n_rows: int
    columns: tuple


@dataclass(frozen=True)
class ParseOptions:
    delimiter: str = ","
    has_header: bool = True
    na_tokens: frozenset = DEFAULT_NA_TOKENS


def _parse_typed(token: str, dtype: str):
    """Parse a single non-missing token as dtype, or raise ValueError."""
    if dtype == "integer":
        if not _INT_RE.match(token):
            raise ValueError(token)
        return int(token)
    if dtype == "real":
        if not _REAL_RE.match(token):
            raise ValueError(token)
        return float(token)
    if dtype == "boolean":
        if token not in _BOOL_TOKENS:
            raise ValueError(token)
        return _BOOL_TOKENS[token]
    if dtype == "date":
        if not _DATE_RE.match(token):
            raise ValueError(token)
        return date.fromisoformat(token)
    return token


def _infer_dtype(tokens: list) -> str:
    """Most specific dtype for which every token parses; text as fallback."""
    for dtype in ("integer", "real", "boolean", "date"):
        try:
            for t in tokens:
                _parse_typed(t, dtype)
        except ValueError:
            continue
        return dtype
    return "text"


def parse_csv(data: bytes, options: ParseOptions = ParseOptions(),
              name: str = "dataset") -> Table:
    """Parse delimited UTF-8 text into a typed :class:`Table`.

    A UTF-8 BOM is stripped; LF and CRLF line endings are both accepted.
    Raises EmptyInputError when there are no data rows, RaggedRowsError
    (with the 1-based file row index) on a row with the wrong field count,
    and EncodingError on invalid UTF-8.
    """
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise EncodingError(str(exc)) from exc

    reader = csv.reader(io.StringIO(text, newline=""),
                        delimiter=options.delimiter)
    raw_rows = [row for row in reader]
    # A trailing newline yields no extra row with csv.reader; drop rows that
    # are completely empty (blank lines).
    rows = [(i + 1, row) for i, row in enumerate(raw_rows) if row]
    if not rows:
        raise EmptyInputError("no data")

    if options.has_header:
        _, header = rows[0]
        data_rows = rows[1:]
        if any(not h for h in header):
            raise InvalidHeaderError("empty column name in header")
        if len(set(header)) != len(header):
            raise InvalidHeaderError("duplicate column name in header")
    else:
        header = [f"col{i + 1}" for i in range(len(rows[0][1]))]
        data_rows = rows

    n_fields = len(header)
    if n_fields == 1:
        # In a one-column file a blank line is a single empty field, not a
        # separator; recover the rows dropped above.
        start = rows[0][0] if options.has_header else 0
        data_rows = [(i + 1, row if row else [""])
                     for i, row in enumerate(raw_rows)
                     if i + 1 > start]

    if not data_rows:
        raise EmptyInputError("no data rows")

    for file_idx, row in data_rows:
        if len(row) != n_fields:
            raise RaggedRowsError(file_idx, n_fields, len(row))

    columns = []
    for j, col_name in enumerate(header):
        tokens = [row[j] for _, row in data_rows]
        present = [t for t in tokens if t not in options.na_tokens]
        dtype = _infer_dtype(present)
        cells = tuple(
            None if t in options.na_tokens else _parse_typed(t, dtype)
            for t in tokens
        )
        columns.append(Column(col_name, dtype, cells))

    return Table(name=name, columns=tuple(columns))


def format_cell(value) -> str:
    """Render one non-missing cell as CSV/display text."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, date):
        return value.isoformat()
    return str(value)


def _csv_field(text: str, delimiter: str) -> str:
    if any(ch in text for ch in (delimiter, '"', "\n", "\r")):
        return '"' + text.replace('"', '""') + '"'
    return text


def to_csv(table: Table, delimiter: str = ",") -> bytes:
    """Serialize a table as RFC-4180-style CSV (UTF-8, LF line endings).

    Missing cells become empty fields; reals use the shortest decimal
    representation that round-trips.
    """
    out = []
    out.append(delimiter.join(_csv_field(c.name, delimiter)
                              for c in table.columns))
    for i in range(table.n_rows):
        fields = []
        for col in table.columns:
            v = col.cells[i]
            fields.append("" if v is None
                          else _csv_field(format_cell(v), delimiter))
        out.append(delimiter.join(fields))
    return ("\n".join(out) + "\n").encode("utf-8")


def schema(table: Table) -> Schema:
    """Schema with exact per-column missing and distinct counts."""
    infos = []
    for col in table.columns:
        present = col.non_missing()
        infos.append(ColumnInfo(
            name=col.name,
            dtype=col.dtype,
            n_missing=len(col.cells) - len(present),
            n_distinct=len(set(present)),
        ))
    return Schema(n_rows=table.n_rows, columns=tuple(infos))
