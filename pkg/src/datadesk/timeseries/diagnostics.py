"""Autocorrelation, Ljung-Box, KPSS stationarity test and ndiffs.

The KPSS statistic is the level-stationarity variant with a Bartlett-kernel
long-run variance at truncation l = floor(4 * (n/100)^(1/4)); critical
values are the published level-stationarity table {10%: 0.347, 5%: 0.463,
2.5%: 0.574, 1%: 0.739}.  ndiffs applies KPSS sequentially at 5% with
max_d = 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import (
    ConstantSeriesError,
    LagOutOfRangeError,
    SeriesTooShortError,
)
from ..special import chi2_sf
from .series import diff_values

KPSS_CRITICAL_VALUES = {0.10: 0.347, 0.05: 0.463, 0.025: 0.574, 0.01: 0.739}


def _as_values(series) -> list:
    values = getattr(series, "values", series)
    return [float(v) for v in values]


def acf(series, max_lag: int) -> list:
    """Sample autocorrelations rho_1..rho_max_lag (rho_0 is 1 by definition).

    rho_k = sum_{t>k} (x_t - xbar)(x_{t-k} - xbar) / sum_t (x_t - xbar)^2.
    """
    x = _as_values(series)
    n = len(x)
    if n < 2:
        raise SeriesTooShortError("need at least 2 observations")
    if not 1 <= max_lag <= n - 1:
        raise LagOutOfRangeError(f"max_lag must be in [1, {n - 1}]")
    mean = sum(x) / n
    dev = [v - mean for v in x]
    denom = sum(d * d for d in dev)
    if denom == 0.0:
        raise ConstantSeriesError("series has zero variance")
    out = []
    for k in range(1, max_lag + 1):
        num = sum(dev[t] * dev[t - k] for t in range(k, n))
        out.append(num / denom)
    return out


@dataclass(frozen=True)
class LjungBoxResult:
    """Per-lag rho_k, cumulative Q_k, df_k and p_k for k = 1..max_lag.

    df_k = max(k - fitdf, 0); entries with df_k = 0 carry no p-value.
    """

    lags: tuple
    rho: tuple
    q: tuple
    df: tuple
    p: tuple  # float or None where df == 0
    fitdf: int
    n: int


def ljung_box(series, max_lag: int, fitdf: int = 0) -> LjungBoxResult:
    """Portmanteau test Q_k = n(n+2) sum_{j<=k} rho_j^2 / (n-j)."""
    x = _as_values(series)
    n = len(x)
    rho = acf(x, max_lag)
    qs, dfs, ps = [], [], []
    acc = 0.0
    for k in range(1, max_lag + 1):
        acc += rho[k - 1] ** 2 / (n - k)
        q = n * (n + 2) * acc
        df = max(k - fitdf, 0)
        qs.append(q)
        dfs.append(df)
        ps.append(chi2_sf(q, df) if df > 0 else None)
    return LjungBoxResult(
        lags=tuple(range(1, max_lag + 1)),
        rho=tuple(rho), q=tuple(qs), df=tuple(dfs), p=tuple(ps),
        fitdf=fitdf, n=n,
    )


@dataclass(frozen=True)
class KpssResult:
    statistic: float
    lag_truncation: int
    critical_values: dict
    reject_at_5pct: bool


def default_kpss_lags(n: int) -> int:
    return int(math.floor(4.0 * (n / 100.0) ** 0.25))


def kpss_test(series, lags=None) -> KpssResult:
    """Level-stationarity KPSS test.

    e_t = x_t - xbar, S_t = cumulative sum of e; the statistic is
    (1/n^2) sum S_t^2 divided by the Bartlett long-run variance.
    """
    x = _as_values(series)
    n = len(x)
    if lags is None:
        if n < 8:
            raise SeriesTooShortError("KPSS needs at least 8 observations")
        lags = default_kpss_lags(n)
    elif n < 2:
        raise SeriesTooShortError("KPSS needs at least 2 observations")
    mean = sum(x) / n
    e = [v - mean for v in x]
    if all(v == 0.0 for v in e):
        raise ConstantSeriesError("series has zero variance")
    s_sq = 0.0
    s = 0.0
    for v in e:
        s += v
        s_sq += s * s
    lrv = sum(v * v for v in e)
    for j in range(1, lags + 1):
        gamma_j = sum(e[t] * e[t - j] for t in range(j, n))
        lrv += 2.0 * (1.0 - j / (lags + 1.0)) * gamma_j
    lrv /= n
    stat = s_sq / (n * n * lrv)
    return KpssResult(
        statistic=stat,
        lag_truncation=lags,
        critical_values=dict(KPSS_CRITICAL_VALUES),
        reject_at_5pct=stat > KPSS_CRITICAL_VALUES[0.05],
    )


def ndiffs(series, alpha: float = 0.05, max_d: int = 2) -> int:
    """Smallest number of first differences after which KPSS stops rejecting.

    A constant series counts as stationary.  Only alpha = 0.05 has a
    committed critical value.
    """
    if alpha != 0.05:
        raise LagOutOfRangeError("only alpha = 0.05 is supported")
    x = _as_values(series)
    if len(x) < 8:
        raise SeriesTooShortError("ndiffs needs at least 8 observations")
    d = 0
    while d <= max_d:
        if len(x) < 8:
            return d if d <= max_d else max_d
        if len(set(x)) == 1:
            return d
        if not kpss_test(x).reject_at_5pct:
            return d
        if d == max_d:
            return max_d
        x = diff_values(x, 1, 1)
        d += 1
    return max_d


def residual_diagnostics(model, max_lag: int) -> LjungBoxResult:
    """Ljung-Box on model residuals with fitdf = p+q+P+Q."""
    fitdf = model.spec.n_coefficients
    if max_lag <= fitdf:
        raise LagOutOfRangeError(
            f"max_lag must exceed the {fitdf} fitted coefficients"
        )
    return ljung_box(model.residuals, max_lag, fitdf=fitdf)


def seasonal_strength(values, period: int) -> float:
    """Variance-ratio seasonal strength of a classical MA decomposition.

    F = max(0, 1 - Var(remainder) / Var(detrended)) where the trend is a
    centered moving average of window `period` and the seasonal component
    is the per-period mean of the detrended series (centered to sum zero).
    """
    x = [float(v) for v in values]
    n = len(x)
    if period < 2 or n < 2 * period:
        return 0.0
    half = period // 2
    trend = {}
    if period % 2 == 0:
        for t in range(half, n - half):
            acc = 0.5 * x[t - half] + 0.5 * x[t + half]
            acc += sum(x[t - half + 1:t + half])
            trend[t] = acc / period
    else:
        for t in range(half, n - half):
            trend[t] = sum(x[t - half:t + half + 1]) / period
    detrended = {t: x[t] - trend[t] for t in trend}
    if not detrended:
        return 0.0
    by_period = {}
    for t, v in detrended.items():
        by_period.setdefault(t % period, []).append(v)
    seasonal_means = {k: sum(v) / len(v) for k, v in by_period.items()}
    grand = sum(seasonal_means.values()) / len(seasonal_means)
    seasonal_means = {k: v - grand for k, v in seasonal_means.items()}
    remainder = [v - seasonal_means[t % period] for t, v in detrended.items()]
    det_list = list(detrended.values())

    def var(vals):
        if len(vals) < 2:
            return 0.0
        m = sum(vals) / len(vals)
        return sum((v - m) ** 2 for v in vals) / (len(vals) - 1)

    v_det = var(det_list)
    if v_det == 0.0:
        return 0.0
    return max(0.0, 1.0 - var(remainder) / v_det)
