"""Canonical JSON encodings of specs and results, shared by API and CLI.

Predicate encoding (one of):
    {"column": c, "op": "==|!=|<|<=|>|>=|contains", "value": v}
    {"column": c, "op": "is_missing" | "not_missing"}
    {"and": [pred, ...]} | {"or": [pred, ...]} | {"not": pred}

AggregationSpec encoding:
    {"group_by": [c, ...], "measures": [{"column": c, "fn": f}, ...]}

Series spec encoding:
    {"value_col": c, "time": <time spec>} where the time spec is one of
    {"date_col": c}, {"year_col": c, "period_col"?: c, "frequency"?: f},
    {"start_year": y, "start_period"?: p, "frequency": f}

Model spec encoding: "p,d,q" / "p,d,q,P,D,Q,s" or
    {"p":..,"d":..,"q":..,"P":..,"D":..,"Q":..,"s":..,"include_mean"?:..}
"""

from __future__ import annotations

from datetime import date

from .charts import HistogramData, SeriesPlotData, XYSeries
from .errors import BadRequestError
from .ops import (
    AggregationSpec,
    And,
    ColumnSummary,
    Comparison,
    FrequencyTable,
    Measure,
    Not,
    Or,
)
from .table import Schema, Table, format_cell
from .timeseries import (
    ArimaModel,
    ArimaSpec,
    Forecast,
    KpssResult,
    LjungBoxResult,
    TimeSeries,
)


# --- decoding ---------------------------------------------------------------

def predicate_from_json(obj):
    if not isinstance(obj, dict):
        raise BadRequestError("predicate must be an object")
    if "and" in obj:
        return And(tuple(predicate_from_json(p) for p in obj["and"]))
    if "or" in obj:
        return Or(tuple(predicate_from_json(p) for p in obj["or"]))
    if "not" in obj:
        return Not(predicate_from_json(obj["not"]))
    if "column" not in obj or "op" not in obj:
        raise BadRequestError("predicate needs 'column' and 'op'")
    return Comparison(column=obj["column"], comparator=obj["op"],
                      operand=obj.get("value"))


def predicate_to_json(pred):
    if isinstance(pred, And):
        return {"and": [predicate_to_json(p) for p in pred.items]}
    if isinstance(pred, Or):
        return {"or": [predicate_to_json(p) for p in pred.items]}
    if isinstance(pred, Not):
        return {"not": predicate_to_json(pred.item)}
    out = {"column": pred.column, "op": pred.comparator}
    if pred.operand is not None:
        out["value"] = jsonable_cell(pred.operand)
    return out


def aggregation_from_json(obj) -> AggregationSpec:
    if not isinstance(obj, dict):
        raise BadRequestError("aggregation spec must be an object")
    try:
        measures = tuple(Measure(column=m["column"], fn=m["fn"])
                         for m in obj.get("measures", []))
        return AggregationSpec(group_keys=tuple(obj.get("group_by", [])),
                               measures=measures)
    except (KeyError, TypeError) as exc:
        raise BadRequestError(f"bad aggregation spec: {exc}") from exc


def arima_spec_from_json(obj) -> ArimaSpec:
    if isinstance(obj, str):
        parts = [p.strip() for p in obj.split(",")]
        if len(parts) not in (3, 7):
            raise BadRequestError(
                "model spec string must be 'p,d,q' or 'p,d,q,P,D,Q,s'"
            )
        try:
            nums = [int(p) for p in parts]
        except ValueError as exc:
            raise BadRequestError("model spec orders must be integers") from exc
        if len(nums) == 3:
            return ArimaSpec(p=nums[0], d=nums[1], q=nums[2])
        return ArimaSpec(p=nums[0], d=nums[1], q=nums[2],
                         P=nums[3], D=nums[4], Q=nums[5], s=nums[6])
    if isinstance(obj, dict):
        known = {"p", "d", "q", "P", "D", "Q", "s", "include_mean"}
        bad = set(obj) - known
        if bad:
            raise BadRequestError(f"unknown model spec fields: {sorted(bad)}")
        return ArimaSpec(**obj)
    raise BadRequestError("model spec must be a string or object")


def series_spec_from_json(obj):
    """Return (value_col, time_spec) from a series spec object."""
    if not isinstance(obj, dict) or "value_col" not in obj:
        raise BadRequestError("series spec needs 'value_col'")
    time_spec = obj.get("time", {})
    if not isinstance(time_spec, dict):
        raise BadRequestError("'time' must be an object")
    return obj["value_col"], time_spec


# --- encoding ---------------------------------------------------------------

def jsonable_cell(value):
    if isinstance(value, date):
        return value.isoformat()
    return value


def table_to_json(table: Table, offset: int = 0, limit=None) -> dict:
    end = table.n_rows if limit is None else min(table.n_rows, offset + limit)
    rows = [[jsonable_cell(c.cells[i]) for c in table.columns]
            for i in range(offset, max(offset, end))]
    return {
        "name": table.name,
        "columns": [{"name": c.name, "dtype": c.dtype}
                    for c in table.columns],
        "rows": rows,
        "offset": offset,
        "total_rows": table.n_rows,
    }


def schema_to_json(s: Schema) -> dict:
    return {
        "n_rows": s.n_rows,
        "columns": [
            {"name": c.name, "dtype": c.dtype, "n_missing": c.n_missing,
             "n_distinct": c.n_distinct}
            for c in s.columns
        ],
    }


def summary_to_json(s: ColumnSummary) -> dict:
    return {
        "n": s.n, "n_missing": s.n_missing, "min": s.min, "q1": s.q1,
        "median": s.median, "q3": s.q3, "max": s.max, "mean": s.mean,
        "sd": s.sd,
    }


def frequency_to_json(f: FrequencyTable) -> dict:
    return {"entries": [{"level": lvl, "count": cnt}
                        for lvl, cnt in f.entries]}


def histogram_to_json(h: HistogramData) -> dict:
    return {"edges": list(h.edges), "counts": list(h.counts),
            "n_used": h.n_used}


def xy_to_json(s: XYSeries) -> dict:
    return {"kind": s.kind,
            "points": [[jsonable_cell(x), y] for x, y in s.points]}


def series_plot_to_json(p: SeriesPlotData) -> dict:
    return {"times": list(p.times), "values": list(p.values),
            "reference_line": p.reference_line}


def timeseries_to_json(s: TimeSeries) -> dict:
    return {
        "values": list(s.values),
        "start_year": s.start_year,
        "start_period": s.start_period,
        "frequency": s.frequency,
        "n": len(s.values),
        "times": s.time_labels(),
    }


def ljung_box_to_json(r: LjungBoxResult) -> dict:
    return {
        "n": r.n,
        "fitdf": r.fitdf,
        "lags": list(r.lags),
        "rho": list(r.rho),
        "q": list(r.q),
        "df": list(r.df),
        "p": list(r.p),
    }


def kpss_to_json(r: KpssResult) -> dict:
    return {
        "statistic": r.statistic,
        "lag_truncation": r.lag_truncation,
        "critical_values": {str(k): v for k, v in r.critical_values.items()},
        "reject_at_5pct": r.reject_at_5pct,
    }


def arima_spec_to_json(spec: ArimaSpec) -> dict:
    return {"p": spec.p, "d": spec.d, "q": spec.q, "P": spec.P,
            "D": spec.D, "Q": spec.Q, "s": spec.s,
            "include_mean": spec.include_mean}


def model_to_json(m: ArimaModel, include_residuals: bool = True) -> dict:
    out = {
        "spec": arima_spec_to_json(m.spec),
        "order": m.spec.order_string(),
        "ar": list(m.ar), "ma": list(m.ma),
        "sar": list(m.sar), "sma": list(m.sma),
        "mean": m.mean,
        "sigma2": m.sigma2,
        "loglik": m.loglik, "aic": m.aic, "aicc": m.aicc, "bic": m.bic,
        "n_obs": m.n_obs,
    }
    if include_residuals:
        out["residuals"] = list(m.residuals)
    return out


def forecast_to_json(f: Forecast, series: TimeSeries = None) -> dict:
    out = {
        "horizon": f.horizon,
        "point": list(f.point),
        "intervals": {
            f"{level:g}": {"lower": list(lo), "upper": list(hi)}
            for level, (lo, hi) in sorted(f.intervals.items())
        },
    }
    if series is not None:
        from .timeseries.series import advance
        labels = []
        n = len(series.values)
        for h in range(1, f.horizon + 1):
            year, period = advance(series.start_year, series.start_period,
                                   series.frequency, n - 1 + h)
            if series.frequency == 1:
                labels.append(str(year))
            elif series.frequency == 4:
                labels.append(f"{year} Q{period}")
            else:
                labels.append(f"{year}-{period:02d}")
        out["times"] = labels
    return out


def rows_to_display(table: Table) -> str:
    """Plain-text table for --output table."""
    headers = [c.name for c in table.columns]
    rows = [[("" if c.cells[i] is None else format_cell(c.cells[i]))
             for c in table.columns] for i in range(table.n_rows)]
    widths = [max(len(h), *(len(r[j]) for r in rows)) if rows else len(h)
              for j, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)))
    return "\n".join(lines) + "\n"
