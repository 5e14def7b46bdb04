import math
import random
import statistics

import pytest

from datadesk.errors import (
    AllMissingError,
    DuplicateSelectionError,
    NonNumericColumnError,
    TypeMismatchError,
    UnknownColumnError,
)
from datadesk.ops import (
    AggregationSpec,
    And,
    Comparison,
    Measure,
    Not,
    Or,
    filter_rows,
    group_aggregate,
    select_columns,
    summarize_column,
    value_counts,
)
from datadesk.table import Column, Table
from conftest import random_table


def make(cols):
    return Table("t", tuple(Column(n, d, tuple(c)) for n, d, c in cols))


# --- filter -----------------------------------------------------------------

def test_filter_arithmetic():
    t = make([("a", "integer", [1, 2, 3])])
    out = filter_rows(t, Comparison("a", ">", 1))
    assert out.column("a").cells == (2, 3)


def test_filter_identity():
    t = make([("a", "integer", [1, 2, 3])])
    out = filter_rows(t, Not(Comparison("a", "is_missing")))
    assert out == t


def test_filter_missing_comparisons_false():
    t = make([("a", "integer", [1, None, 3])])
    out = filter_rows(t, Comparison("a", "<=", 10))
    assert out.column("a").cells == (1, 3)
    out = filter_rows(t, Comparison("a", "is_missing"))
    assert out.column("a").cells == (None,)


def test_filter_contains():
    t = make([("a", "text", ["apple", "pear", None])])
    out = filter_rows(t, Comparison("a", "contains", "pp"))
    assert out.column("a").cells == ("apple",)


def test_filter_type_errors():
    t = make([("a", "text", ["x"]), ("b", "integer", [1])])
    with pytest.raises(TypeMismatchError):
        filter_rows(t, Comparison("a", "<", "y"))
    with pytest.raises(TypeMismatchError):
        filter_rows(t, Comparison("b", "contains", "1"))
    with pytest.raises(UnknownColumnError):
        filter_rows(t, Comparison("zz", "==", 1))


def test_filter_partition_counts():
    t = make([("a", "integer", [1, 2, 3, 4, 5])])
    p = Comparison("a", ">", 2)
    n_true = filter_rows(t, p).n_rows
    n_false = filter_rows(t, Not(p)).n_rows
    assert n_true + n_false == t.n_rows


def _numeric_leaf(rng, col):
    values = [c for c in col.cells if c is not None]
    pivot = rng.choice(values) if values else 0
    op = rng.choice(["==", "!=", "<", "<=", ">", ">="])
    return Comparison(col.name, op, pivot)


def test_filter_randomized_against_brute_force(rng):
    ops_map = {
        "==": lambda a, b: a == b, "!=": lambda a, b: a != b,
        "<": lambda a, b: a < b, "<=": lambda a, b: a <= b,
        ">": lambda a, b: a > b, ">=": lambda a, b: a >= b,
    }
    for _ in range(100):
        t = random_table(rng, max_rows=30, max_cols=4)
        numeric = [c for c in t.columns if c.dtype in ("integer", "real")]
        if not numeric:
            continue
        col = rng.choice(numeric)
        leaf = _numeric_leaf(rng, col)
        pred = rng.choice([
            leaf,
            Not(leaf),
            And((leaf, Comparison(col.name, "not_missing"))),
            Or((leaf, Comparison(col.name, "is_missing"))),
        ])

        def eval_row(i, p=pred):
            def rec(p):
                if isinstance(p, Comparison):
                    cell = t.column(p.column).cells[i]
                    if p.comparator == "is_missing":
                        return cell is None
                    if p.comparator == "not_missing":
                        return cell is not None
                    if cell is None:
                        return False
                    return ops_map[p.comparator](cell, p.operand)
                if isinstance(p, And):
                    return all(rec(q) for q in p.items)
                if isinstance(p, Or):
                    return any(rec(q) for q in p.items)
                return not rec(p.item)
            return rec(p)

        expected = [i for i in range(t.n_rows) if eval_row(i)]
        got = filter_rows(t, pred)
        assert got.rows() == [t.row(i) for i in expected]


# --- select -----------------------------------------------------------------

def test_select_identity_and_permutation():
    t = make([("a", "integer", [1]), ("b", "text", ["x"])])
    assert select_columns(t, ["a", "b"]) == t
    out = select_columns(t, ["b", "a"])
    assert out.column_names == ["b", "a"]
    assert out.column("a").cells == (1,)


def test_select_errors():
    t = make([("a", "integer", [1])])
    with pytest.raises(UnknownColumnError):
        select_columns(t, ["zz"])
    with pytest.raises(DuplicateSelectionError):
        select_columns(t, ["a", "a"])


def test_select_preserves_n_rows_randomized(rng):
    for _ in range(100):
        t = random_table(rng, max_rows=25, max_cols=6)
        names = [c.name for c in t.columns]
        rng.shuffle(names)
        take = names[:rng.randint(1, len(names))]
        assert select_columns(t, take).n_rows == t.n_rows


# --- aggregate --------------------------------------------------------------

def test_group_sum_trivial():
    t = make([("g", "text", ["A", "A", "B"]),
              ("x", "integer", [1, 2, 3])])
    out = group_aggregate(t, AggregationSpec(("g",), (Measure("x", "sum"),)))
    assert out.rows() == [["A", 3], ["B", 3]]


def test_group_single_mean():
    t = make([("g", "text", ["k", "k"]), ("x", "integer", [2, 4])])
    out = group_aggregate(t, AggregationSpec(("g",), (Measure("x", "mean"),)))
    assert out.rows() == [["k", 3.0]]


def test_group_missing_key_level():
    t = make([("g", "text", ["A", None, "A"]),
              ("x", "integer", [1, 2, 3])])
    out = group_aggregate(t, AggregationSpec(("g",), (Measure("x", "count"),)))
    assert out.rows() == [["A", 2], [None, 1]]


def test_group_errors():
    t = make([("g", "text", ["A"]), ("x", "text", ["y"])])
    with pytest.raises(TypeMismatchError):
        group_aggregate(t, AggregationSpec(("g",), (Measure("x", "sum"),)))
    with pytest.raises(TypeMismatchError):
        group_aggregate(t, AggregationSpec(("g",), (Measure("g", "count"),)))


def _oracle_agg(fn, values):
    if fn == "count":
        return len(values)
    if not values:
        return None
    if fn == "sum":
        return sum(values)
    if fn == "mean":
        return statistics.fmean(values)
    if fn == "min":
        return min(values)
    if fn == "max":
        return max(values)
    if fn == "median":
        data = sorted(float(v) for v in values)
        n = len(data)
        mid = n // 2
        return data[mid] if n % 2 else (data[mid - 1] + data[mid]) / 2
    if fn == "sd":
        return statistics.stdev(values) if len(values) >= 2 else None
    raise AssertionError(fn)


def test_group_randomized_against_brute_force(rng):
    for _ in range(100):
        t = random_table(rng, max_rows=40, max_cols=5)
        numeric = [c for c in t.columns if c.dtype in ("integer", "real")]
        keys = [c for c in t.columns if c not in numeric]
        if not numeric or not keys:
            continue
        key = rng.choice(keys)
        measure_col = rng.choice(numeric)
        fn = rng.choice(["sum", "mean", "count", "min", "max", "median", "sd"])
        out = group_aggregate(t, AggregationSpec(
            (key.name,), (Measure(measure_col.name, fn),)))

        expected = {}
        order = []
        for i in range(t.n_rows):
            k = key.cells[i]
            if k not in expected:
                expected[k] = []
                order.append(k)
            if measure_col.cells[i] is not None:
                expected[k].append(measure_col.cells[i])
        want = [[k, _oracle_agg(fn, expected[k])] for k in order]
        got = out.rows()
        assert len(got) == len(want)
        for (gk, gv), (wk, wv) in zip(got, want):
            assert gk == wk
            if isinstance(wv, float):
                assert gv == pytest.approx(wv, abs=1e-9)
            else:
                assert gv == wv


def test_group_sum_conservation(rng):
    for _ in range(30):
        t = random_table(rng, max_rows=30, max_cols=4)
        numeric = [c for c in t.columns if c.dtype == "real"]
        keys = [c for c in t.columns if c.dtype not in ("real",)]
        if not numeric or not keys:
            continue
        key, col = rng.choice(keys), rng.choice(numeric)
        out = group_aggregate(t, AggregationSpec(
            (key.name,), (Measure(col.name, "sum"),)))
        col_out = out.column(f"sum_{col.name}")
        total = sum(v for v in col_out.cells if v is not None)
        assert total == pytest.approx(
            sum(v for v in col.cells if v is not None), abs=1e-9)


# --- summarize --------------------------------------------------------------

def test_summary_symmetric_case():
    t = make([("x", "integer", [1, 2, 3, 4, 5])])
    s = summarize_column(t, "x")
    assert (s.min, s.q1, s.median, s.q3, s.max, s.mean) == (1, 2, 3, 4, 5, 3)


def test_summary_single_value():
    t = make([("x", "integer", [7])])
    s = summarize_column(t, "x")
    assert s.min == s.q1 == s.median == s.q3 == s.max == s.mean == 7
    assert s.sd is None


def test_summary_errors():
    t = make([("x", "text", ["a"]), ("y", "integer", [None])])
    with pytest.raises(NonNumericColumnError):
        summarize_column(t, "x")
    with pytest.raises(AllMissingError):
        summarize_column(t, "y")


def _type7(sorted_vals, p):
    # Direct order-statistic oracle.
    n = len(sorted_vals)
    h = (n - 1) * p
    lo = math.floor(h)
    hi = min(lo + 1, n - 1)
    return sorted_vals[lo] + (h - lo) * (sorted_vals[hi] - sorted_vals[lo])


def test_summary_randomized_type7(rng):
    for _ in range(200):
        n = rng.randint(1, 60)
        values = [rng.uniform(-100, 100) for _ in range(n)]
        t = make([("x", "real", values)])
        s = summarize_column(t, "x")
        data = sorted(values)
        assert s.q1 == pytest.approx(_type7(data, 0.25), abs=1e-12)
        assert s.median == pytest.approx(_type7(data, 0.5), abs=1e-12)
        assert s.q3 == pytest.approx(_type7(data, 0.75), abs=1e-12)
        assert s.q1 <= s.median <= s.q3
        assert s.min <= s.q1 and s.q3 <= s.max
        if n >= 2:
            assert s.sd == pytest.approx(statistics.stdev(values), rel=1e-10)


def test_summary_permutation_invariant(rng):
    values = [rng.uniform(0, 1) for _ in range(31)]
    t1 = make([("x", "real", values)])
    shuffled = list(values)
    rng.shuffle(shuffled)
    t2 = make([("x", "real", shuffled)])
    assert summarize_column(t1, "x") == summarize_column(t2, "x")


# --- value counts -----------------------------------------------------------

def test_value_counts_basic():
    t = make([("x", "text", ["a", "b", "a"])])
    assert value_counts(t, "x").entries == (("a", 2), ("b", 1))


def test_value_counts_all_missing():
    t = make([("x", "text", [None, None])])
    assert value_counts(t, "x").entries == ()


def test_value_counts_randomized(rng):
    for _ in range(100):
        t = random_table(rng, max_rows=40, max_cols=3)
        col = rng.choice(t.columns)
        got = value_counts(t, col.name)
        n_present = len(col.non_missing())
        assert sum(c for _, c in got.entries) == n_present
        counts = [c for _, c in got.entries]
        assert counts == sorted(counts, reverse=True)
