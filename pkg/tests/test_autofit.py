import numpy as np
import pytest

from datadesk.errors import TooFewObservationsError
from datadesk.timeseries import ArimaSpec, TimeSeries, auto_fit, fit_arima


def annual(values):
    return TimeSeries(tuple(float(v) for v in values), 2000, 1, 1)


def test_white_noise_beats_arma11():
    rng = np.random.default_rng(70)
    x = rng.standard_normal(150)
    s = annual(x)
    best = auto_fit(s)
    assert best.spec.d == 0
    rival = fit_arima(s, ArimaSpec(p=1, q=1))
    assert best.aicc <= rival.aicc


def test_white_noise_beats_visited_starts():
    # The stepwise search starts from these orders, so the winner must be
    # at least as good (by AICc) as every one of them.
    rng = np.random.default_rng(71)
    x = rng.standard_normal(150)
    s = annual(x)
    best = auto_fit(s)
    for p, q in ((0, 0), (1, 0), (0, 1), (2, 2)):
        rival = fit_arima(s, ArimaSpec(p=p, q=q))
        assert best.aicc <= rival.aicc + 1e-6


def test_trend_selects_d1():
    rng = np.random.default_rng(72)
    t = np.arange(150, dtype=float)
    x = 0.5 * t + rng.standard_normal(150)
    best = auto_fit(annual(x))
    assert best.spec.d >= 1


def test_nonseasonal_input_has_no_seasonal_orders():
    rng = np.random.default_rng(73)
    x = rng.standard_normal(120)
    best = auto_fit(annual(x))
    assert (best.spec.P, best.spec.D, best.spec.Q) == (0, 0, 0)


def test_seasonal_series_gets_seasonal_difference():
    rng = np.random.default_rng(74)
    t = np.arange(96)
    x = 10 * np.sin(2 * np.pi * t / 12) + 0.5 * rng.standard_normal(96)
    s = TimeSeries(tuple(x), 2000, 1, 12)
    best = auto_fit(s)
    assert best.spec.D == 1


def test_ar2_recovery_neighborhood():
    rng = np.random.default_rng(75)
    n = 200
    e = rng.standard_normal(n + 100)
    x = np.zeros(n + 100)
    for t in range(2, n + 100):
        x[t] = 0.6 * x[t - 1] - 0.3 * x[t - 2] + e[t]
    best = auto_fit(annual(x[100:]))
    # selected model should fit at least as well as the truth
    truth = fit_arima(annual(x[100:]), ArimaSpec(p=2))
    assert best.aicc <= truth.aicc + 1e-6


def test_too_short():
    with pytest.raises(TooFewObservationsError):
        auto_fit(annual(list(range(10))))
