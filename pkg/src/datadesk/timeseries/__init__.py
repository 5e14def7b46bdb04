"""Time-series pipeline: series construction, diagnostics, ARIMA fitting
and forecasting."""

from .series import TimeSeries, build_series, difference, diff_values
from .diagnostics import (
    LjungBoxResult,
    KpssResult,
    acf,
    ljung_box,
    kpss_test,
    ndiffs,
    residual_diagnostics,
    seasonal_strength,
)
from .arima import ArimaSpec, ArimaModel, fit_arima
from .autofit import auto_fit
from .forecasting import Forecast, forecast

__all__ = [
    "TimeSeries", "build_series", "difference", "diff_values",
    "LjungBoxResult", "KpssResult", "acf", "ljung_box", "kpss_test",
    "ndiffs", "residual_diagnostics", "seasonal_strength",
    "ArimaSpec", "ArimaModel", "fit_arima", "auto_fit",
    "Forecast", "forecast",
]
