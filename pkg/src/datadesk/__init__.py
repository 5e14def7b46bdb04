"""datadesk: desk-scale data exploration and time-series forecasting.

Typed CSV tables, filter/group/aggregate, descriptive summaries, chart
data, and an ARIMA/SARIMA pipeline (Ljung-Box, KPSS/ndiffs, exact ML
fitting, forecasting) — usable as a library, HTTP service, or CLI.
"""

from .table import Column, ParseOptions, Schema, Table, parse_csv, schema, to_csv
from .ops import (
    AggregationSpec,
    And,
    ColumnSummary,
    Comparison,
    FrequencyTable,
    Measure,
    Not,
    Or,
    filter_rows,
    group_aggregate,
    select_columns,
    summarize_column,
    value_counts,
)
from .charts import (
    HistogramData,
    SeriesPlotData,
    XYSeries,
    histogram,
    render_svg,
    xy_series,
)
from . import timeseries

__version__ = "0.1.0"

__all__ = [
    "Table", "Column", "Schema", "ParseOptions",
    "parse_csv", "to_csv", "schema",
    "Comparison", "And", "Or", "Not",
    "AggregationSpec", "Measure", "ColumnSummary", "FrequencyTable",
    "filter_rows", "select_columns", "group_aggregate",
    "summarize_column", "value_counts",
    "HistogramData", "XYSeries", "SeriesPlotData",
    "histogram", "xy_series", "render_svg",
    "timeseries",
]
