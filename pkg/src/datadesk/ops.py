"""Filtering, selection, grouping/aggregation and per-variable summaries.

All operations are pure functions over immutable :class:`~datadesk.table.Table`
values.  Missing cells are excluded from aggregates rather than propagated;
comparisons touching a missing cell evaluate to false (the explicit
``is_missing`` / ``not_missing`` tests excepted).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date

from .errors import (
    AllMissingError,
    DuplicateSelectionError,
    NonNumericColumnError,
    TypeMismatchError,
    UnknownColumnError,
)
from .table import Column, Table, format_cell

COMPARATORS = ("==", "!=", "<", "<=", ">", ">=", "contains",
               "is_missing", "not_missing")
_ORDER_OPS = ("<", "<=", ">", ">=")

AGG_FUNCTIONS = ("sum", "mean", "count", "min", "max", "median", "sd")


# --- predicates -------------------------------------------------------------

@dataclass(frozen=True)
class Comparison:
    """Leaf predicate: <column> <comparator> <operand>."""

    column: str
    comparator: str
    operand: object = None


@dataclass(frozen=True)
class And:
    items: tuple


@dataclass(frozen=True)
class Or:
    items: tuple


@dataclass(frozen=True)
class Not:
    item: object


Predicate = object  # Comparison | And | Or | Not


def _validate_leaf(table: Table, leaf: Comparison) -> None:
    col = table.column(leaf.column)
    cmp = leaf.comparator
    if cmp not in COMPARATORS:
        raise TypeMismatchError(f"unknown comparator {cmp!r}")
    if cmp in ("is_missing", "not_missing"):
        return
    if cmp in _ORDER_OPS and col.dtype not in ("integer", "real", "date"):
        raise TypeMismatchError(
            f"comparator {cmp!r} requires a numeric or date column, "
            f"{leaf.column!r} is {col.dtype}"
        )
    if cmp == "contains" and col.dtype != "text":
        raise TypeMismatchError(
            f"'contains' requires a text column, {leaf.column!r} is {col.dtype}"
        )
    _coerce_operand(col, leaf.operand)


def _coerce_operand(col: Column, operand):
    """Check/convert a literal to the column's cell type."""
    if operand is None:
        raise TypeMismatchError(f"comparator needs an operand for {col.name!r}")
    if col.dtype == "integer":
        if isinstance(operand, bool) or not isinstance(operand, (int, float)):
            raise TypeMismatchError(f"expected number for {col.name!r}")
        return operand
    if col.dtype == "real":
        if isinstance(operand, bool) or not isinstance(operand, (int, float)):
            raise TypeMismatchError(f"expected number for {col.name!r}")
        return float(operand)
    if col.dtype == "boolean":
        if not isinstance(operand, bool):
            raise TypeMismatchError(f"expected boolean for {col.name!r}")
        return operand
    if col.dtype == "date":
        if isinstance(operand, date):
            return operand
        if isinstance(operand, str):
            try:
                return date.fromisoformat(operand)
            except ValueError as exc:
                raise TypeMismatchError(str(exc)) from exc
        raise TypeMismatchError(f"expected ISO date for {col.name!r}")
    if not isinstance(operand, str):
        raise TypeMismatchError(f"expected text for {col.name!r}")
    return operand


def validate_predicate(table: Table, pred: Predicate) -> None:
    if isinstance(pred, Comparison):
        _validate_leaf(table, pred)
    elif isinstance(pred, (And, Or)):
        for p in pred.items:
            validate_predicate(table, p)
    elif isinstance(pred, Not):
        validate_predicate(table, pred.item)
    else:
        raise TypeMismatchError(f"not a predicate: {pred!r}")


def _eval_leaf(table: Table, leaf: Comparison, i: int) -> bool:
    col = table.column(leaf.column)
    cell = col.cells[i]
    cmp = leaf.comparator
    if cmp == "is_missing":
        return cell is None
    if cmp == "not_missing":
        return cell is not None
    if cell is None:
        return False
    operand = _coerce_operand(col, leaf.operand)
    if cmp == "==":
        return cell == operand
    if cmp == "!=":
        return cell != operand
    if cmp == "<":
        return cell < operand
    if cmp == "<=":
        return cell <= operand
    if cmp == ">":
        return cell > operand
    if cmp == ">=":
        return cell >= operand
    if cmp == "contains":
        return operand in cell
    raise TypeMismatchError(f"unknown comparator {cmp!r}")


def eval_predicate(table: Table, pred: Predicate, i: int) -> bool:
    if isinstance(pred, Comparison):
        return _eval_leaf(table, pred, i)
    if isinstance(pred, And):
        return all(eval_predicate(table, p, i) for p in pred.items)
    if isinstance(pred, Or):
        return any(eval_predicate(table, p, i) for p in pred.items)
    if isinstance(pred, Not):
        return not eval_predicate(table, pred.item, i)
    raise TypeMismatchError(f"not a predicate: {pred!r}")


def filter_rows(table: Table, pred: Predicate) -> Table:
    """Keep exactly the rows where the predicate is true, order preserved."""
    validate_predicate(table, pred)
    keep = [i for i in range(table.n_rows) if eval_predicate(table, pred, i)]
    columns = tuple(
        Column(c.name, c.dtype, tuple(c.cells[i] for i in keep))
        for c in table.columns
    )
    return Table(name=table.name, columns=columns)


def select_columns(table: Table, names) -> Table:
    """Project onto the requested columns in the requested order."""
    if len(set(names)) != len(names):
        raise DuplicateSelectionError("duplicate column in selection")
    return Table(name=table.name,
                 columns=tuple(table.column(n) for n in names))


# --- aggregation ------------------------------------------------------------

@dataclass(frozen=True)
class Measure:
    column: str
    fn: str


@dataclass(frozen=True)
class AggregationSpec:
    group_keys: tuple
    measures: tuple


def _validate_agg(table: Table, spec: AggregationSpec) -> None:
    for k in spec.group_keys:
        table.column(k)
    for m in spec.measures:
        col = table.column(m.column)
        if m.fn not in AGG_FUNCTIONS:
            raise TypeMismatchError(f"unknown aggregate {m.fn!r}")
        if m.column in spec.group_keys:
            raise TypeMismatchError(
                f"column {m.column!r} is both group key and measure"
            )
        if m.fn != "count" and not col.is_numeric:
            raise TypeMismatchError(
                f"{m.fn} requires a numeric column, {m.column!r} is {col.dtype}"
            )


def _apply_fn(fn: str, values: list):
    """Aggregate non-missing values; None when undefined."""
    if fn == "count":
        return len(values)
    if not values:
        return None
    if fn == "sum":
        return sum(values)
    if fn == "min":
        return min(values)
    if fn == "max":
        return max(values)
    if fn == "mean":
        return sum(float(v) for v in values) / len(values)
    if fn == "median":
        return quantile(sorted(float(v) for v in values), 0.5)
    if fn == "sd":
        if len(values) < 2:
            return None
        mean = sum(float(v) for v in values) / len(values)
        return math.sqrt(sum((float(v) - mean) ** 2 for v in values)
                         / (len(values) - 1))
    raise TypeMismatchError(f"unknown aggregate {fn!r}")


def group_aggregate(table: Table, spec: AggregationSpec) -> Table:
    """One output row per distinct group-key combination.

    Missing is a valid key level; groups appear in first-appearance order.
    Output columns are the keys followed by one ``<fn>_<column>`` column per
    measure.
    """
    _validate_agg(table, spec)
    key_cols = [table.column(k) for k in spec.group_keys]
    groups = {}  # key tuple -> list of row indices
    for i in range(table.n_rows):
        key = tuple(c.cells[i] for c in key_cols)
        groups.setdefault(key, []).append(i)

    out_cols = []
    keys_in_order = list(groups)
    for j, kc in enumerate(key_cols):
        out_cols.append(Column(kc.name, kc.dtype,
                               tuple(k[j] for k in keys_in_order)))
    for m in spec.measures:
        src = table.column(m.column)
        cells = []
        for key in keys_in_order:
            values = [src.cells[i] for i in groups[key]
                      if src.cells[i] is not None]
            cells.append(_apply_fn(m.fn, values))
        if m.fn == "count":
            dtype = "integer"
        elif m.fn in ("sum", "min", "max"):
            dtype = src.dtype
        else:
            dtype = "real"
        out_cols.append(Column(f"{m.fn}_{m.column}", dtype, tuple(cells)))
    return Table(name=table.name, columns=tuple(out_cols))


# --- summaries --------------------------------------------------------------

def quantile(sorted_values: list, p: float) -> float:
    """Type-7 quantile: linear interpolation at position 1 + (n-1)p."""
    n = len(sorted_values)
    if n == 1:
        return float(sorted_values[0])
    h = 1 + (n - 1) * p
    k = int(math.floor(h))
    gamma = h - k
    if k >= n:
        return float(sorted_values[-1])
    lo = float(sorted_values[k - 1])
    hi = float(sorted_values[k])
    return lo + gamma * (hi - lo)


@dataclass(frozen=True)
class ColumnSummary:
    """Descriptive statistics of one numeric variable."""

    n: int
    n_missing: int
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float
    sd: object  # float | None when fewer than 2 values


def summarize_column(table: Table, name: str) -> ColumnSummary:
    """Min/quartiles/max/mean/sd over the non-missing cells of a column.

    Quartiles follow the type-7 convention; sd uses the n-1 denominator and
    is missing when fewer than two values are present.
    """
    col = table.column(name)
    if not col.is_numeric:
        raise NonNumericColumnError(f"{name!r} is {col.dtype}")
    values = sorted(float(v) for v in col.non_missing())
    if not values:
        raise AllMissingError(f"column {name!r} has no non-missing values")
    n_used = len(values)
    mean = sum(values) / n_used
    sd = None
    if n_used >= 2:
        sd = math.sqrt(sum((v - mean) ** 2 for v in values) / (n_used - 1))
    return ColumnSummary(
        n=len(col.cells),
        n_missing=len(col.cells) - n_used,
        min=values[0],
        q1=quantile(values, 0.25),
        median=quantile(values, 0.5),
        q3=quantile(values, 0.75),
        max=values[-1],
        mean=mean,
        sd=sd,
    )


@dataclass(frozen=True)
class FrequencyTable:
    """Level counts sorted by descending count, then level."""

    entries: tuple  # of (level: str, count: int)


def value_counts(table: Table, name: str) -> FrequencyTable:
    """Count non-missing cells rendered as text levels."""
    col = table.column(name)
    counts = {}
    for cell in col.cells:
        if cell is None:
            continue
        level = format_cell(cell)
        counts[level] = counts.get(level, 0) + 1
    entries = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return FrequencyTable(entries=tuple(entries))
