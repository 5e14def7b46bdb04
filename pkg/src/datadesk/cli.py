"""Batch command-line access to every core operation.

Subcommands read a CSV path plus the same JSON specs the HTTP API uses
(inline or ``@file``), and print JSON, a plain-text table, or SVG to
stdout.  Diagnostics go to stderr.  Exit codes: 0 success, 1 user error,
2 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import charts, jsoncodec as codec, ops
from .errors import BadRequestError, DataDeskError, HorizonOutOfRangeError
from .table import ParseOptions, parse_csv, schema, to_csv
from .timeseries import (
    auto_fit,
    build_series,
    difference,
    fit_arima,
    forecast as run_forecast,
    kpss_test,
    ljung_box,
    ndiffs,
)


def _load_table(path: str, delimiter: str, no_header: bool):
    data = Path(path).read_bytes()
    opts = ParseOptions(delimiter=delimiter, has_header=not no_header)
    return parse_csv(data, opts, name=Path(path).stem)


def _spec_arg(text: str):
    """Inline JSON or @file reference."""
    if text.startswith("@"):
        text = Path(text[1:]).read_text("utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadRequestError(f"invalid JSON spec: {exc}") from exc


def _series_arg(args):
    """Series time layout from --series JSON, or inferred from the table."""
    if args.series:
        obj = _spec_arg(args.series)
        return codec.series_spec_from_json(obj)
    value_col = args.value_col
    if value_col is None:
        raise BadRequestError("provide --series or --value-col")
    time_spec = {}
    if args.date_col:
        time_spec = {"date_col": args.date_col}
    elif args.year_col:
        time_spec = {"year_col": args.year_col}
        if args.period_col:
            time_spec["period_col"] = args.period_col
        if args.frequency:
            time_spec["frequency"] = args.frequency
    elif args.frequency:
        time_spec = {"start_year": args.start_year or 1,
                     "start_period": 1, "frequency": args.frequency}
    else:
        time_spec = {"start_year": args.start_year or 1,
                     "start_period": 1, "frequency": 1}
    return value_col, time_spec


def _emit_json(payload) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _emit_table(table) -> None:
    sys.stdout.write(codec.rows_to_display(table))


def _emit_result_table(args, table) -> None:
    if args.output == "table":
        _emit_table(table)
    elif args.output == "csv":
        sys.stdout.write(to_csv(table).decode("utf-8"))
    else:
        _emit_json(codec.table_to_json(table))


def _add_series_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--series", help="series spec as JSON or @file")
    p.add_argument("--value-col", help="value column name")
    p.add_argument("--date-col", help="date column name")
    p.add_argument("--year-col", help="year column name")
    p.add_argument("--period-col", help="month/quarter column name")
    p.add_argument("--frequency", type=int, choices=(1, 4, 12))
    p.add_argument("--start-year", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="datadesk",
        description="Data exploration and time-series forecasting toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, needs_input=True):
        p = sub.add_parser(name, help=help_text)
        if needs_input:
            p.add_argument("--input", required=True, help="CSV file path")
            p.add_argument("--delimiter", default=",")
            p.add_argument("--no-header", action="store_true")
        p.add_argument("--output", default="json",
                       choices=("json", "table", "svg", "csv"))
        return p

    add("schema", "column names, dtypes, missing/distinct counts")

    p = add("summary", "descriptive statistics of one numeric column")
    p.add_argument("--column", required=True)

    p = add("filter", "keep rows matching a predicate")
    p.add_argument("--predicate", required=True,
                   help="predicate as JSON or @file")

    p = add("select", "project onto named columns")
    p.add_argument("--columns", required=True,
                   help="comma-separated column names")

    p = add("aggregate", "group rows and aggregate measures")
    p.add_argument("--spec", required=True,
                   help="aggregation spec as JSON or @file")

    p = add("counts", "frequency table of one column")
    p.add_argument("--column", required=True)

    p = add("hist", "histogram of one numeric column")
    p.add_argument("--column", required=True)
    p.add_argument("--bins", type=int)

    p = add("plot", "scatter or line chart of two columns")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--kind", default="scatter", choices=("scatter", "line"))

    p = add("ljungbox", "Ljung-Box statistic per lag")
    _add_series_flags(p)
    p.add_argument("--max-lag", type=int, default=10)
    p.add_argument("--fitdf", type=int, default=0)

    p = add("ndiffs", "KPSS test and number of differences")
    _add_series_flags(p)

    p = add("diff", "difference a series (plot payload has a mean line)")
    _add_series_flags(p)
    p.add_argument("--lag", type=int, default=1)
    p.add_argument("--order", type=int, default=1)

    p = add("fit", "fit an ARIMA/SARIMA model (auto when --spec omitted)")
    _add_series_flags(p)
    p.add_argument("--spec", help="'p,d,q' or 'p,d,q,P,D,Q,s' or JSON")

    p = add("forecast", "forecast a series with prediction intervals")
    _add_series_flags(p)
    p.add_argument("--spec", help="'p,d,q' or 'p,d,q,P,D,Q,s' or JSON")
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--levels", default="0.80,0.95")

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--data-dir", default="./datadesk-data")
    p.add_argument("--max-upload-bytes", type=int, default=None)
    p.add_argument("--static-dir", default=None,
                   help="directory with the built web UI")

    return parser


def _model_spec_arg(text):
    if text is None:
        return None
    if text.startswith("@") or text.lstrip().startswith("{"):
        return codec.arima_spec_from_json(_spec_arg(text))
    return codec.arima_spec_from_json(text)


def run(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import os
        import uvicorn
        from .service import create_app
        if args.max_upload_bytes is not None:
            os.environ["DATADESK_MAX_UPLOAD_BYTES"] = str(args.max_upload_bytes)
        if args.static_dir:
            os.environ["DATADESK_STATIC_DIR"] = args.static_dir
        app = create_app(data_dir=args.data_dir)
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
        return 0

    table = _load_table(args.input, args.delimiter, args.no_header)

    if args.command == "schema":
        _emit_json(codec.schema_to_json(schema(table)))
    elif args.command == "summary":
        _emit_json(codec.summary_to_json(
            ops.summarize_column(table, args.column)))
    elif args.command == "filter":
        pred = codec.predicate_from_json(_spec_arg(args.predicate))
        _emit_result_table(args, ops.filter_rows(table, pred))
    elif args.command == "select":
        names = [c.strip() for c in args.columns.split(",")]
        _emit_result_table(args, ops.select_columns(table, names))
    elif args.command == "aggregate":
        spec = codec.aggregation_from_json(_spec_arg(args.spec))
        _emit_result_table(args, ops.group_aggregate(table, spec))
    elif args.command == "counts":
        data = ops.value_counts(table, args.column)
        if args.output == "svg":
            sys.stdout.write(charts.render_svg(data))
        else:
            _emit_json(codec.frequency_to_json(data))
    elif args.command == "hist":
        data = charts.histogram(table, args.column, args.bins)
        if args.output == "svg":
            sys.stdout.write(charts.render_svg(data))
        else:
            _emit_json(codec.histogram_to_json(data))
    elif args.command == "plot":
        data = charts.xy_series(table, args.x, args.y, args.kind)
        if args.output == "svg":
            sys.stdout.write(charts.render_svg(data))
        else:
            _emit_json(codec.xy_to_json(data))
    elif args.command == "ljungbox":
        value_col, time_spec = _series_arg(args)
        ts = build_series(table, value_col, time_spec)
        result = ljung_box(ts.values, args.max_lag, fitdf=args.fitdf)
        _emit_json(codec.ljung_box_to_json(result))
    elif args.command == "ndiffs":
        value_col, time_spec = _series_arg(args)
        ts = build_series(table, value_col, time_spec)
        _emit_json({"ndiffs": ndiffs(ts.values),
                    "kpss": codec.kpss_to_json(kpss_test(ts.values))})
    elif args.command == "diff":
        value_col, time_spec = _series_arg(args)
        ts = build_series(table, value_col, time_spec)
        diffed = difference(ts, args.lag, args.order)
        mean = sum(diffed.values) / len(diffed.values)
        plot = charts.SeriesPlotData(times=tuple(diffed.time_labels()),
                                     values=diffed.values,
                                     reference_line=mean)
        if args.output == "svg":
            sys.stdout.write(charts.render_svg(plot))
        else:
            _emit_json(codec.series_plot_to_json(plot))
    elif args.command == "fit":
        value_col, time_spec = _series_arg(args)
        ts = build_series(table, value_col, time_spec)
        spec = _model_spec_arg(args.spec)
        model = fit_arima(ts, spec) if spec is not None else auto_fit(ts)
        _emit_json(codec.model_to_json(model))
    elif args.command == "forecast":
        value_col, time_spec = _series_arg(args)
        ts = build_series(table, value_col, time_spec)
        if not 1 <= args.horizon <= 5 * ts.frequency:
            raise HorizonOutOfRangeError(
                f"horizon must be in [1, {5 * ts.frequency}]"
            )
        spec = _model_spec_arg(args.spec)
        model = fit_arima(ts, spec) if spec is not None else auto_fit(ts)
        levels = tuple(float(v) for v in args.levels.split(","))
        result = run_forecast(model, args.horizon, levels)
        payload = codec.forecast_to_json(result, ts)
        payload["model"] = codec.model_to_json(model,
                                               include_residuals=False)
        _emit_json(payload)
    else:  # pragma: no cover
        parser.error(f"unknown command {args.command!r}")
    return 0


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        return run(argv)
    except DataDeskError as exc:
        sys.stderr.write(f"error [{exc.code}]: {exc}\n")
        return 1 if exc.caller_fault else 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"error [file_not_found]: {exc}\n")
        return 1
    except SystemExit as exc:
        # argparse exits 2 on usage errors; those are user errors here.
        return 0 if exc.code in (0, None) else 1
    except Exception as exc:  # pragma: no cover
        sys.stderr.write(f"error [internal_error]: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
