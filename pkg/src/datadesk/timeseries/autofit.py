"""Automatic order selection: stepwise AICc search.

d comes from sequential KPSS (ndiffs); D is 1 iff the seasonal strength of
a classical decomposition exceeds 0.64.  The (p,q)(P,Q) search starts from
a small grid and moves +/-1 in one order at a time, keeping the
AICc-minimal fitted model.
"""

from __future__ import annotations

from ..errors import (
    DataDeskError,
    NonConvergenceError,
    TooFewObservationsError,
)
from .arima import ArimaModel, ArimaSpec, fit_arima
from .diagnostics import ndiffs, seasonal_strength
from .series import TimeSeries, diff_values

SEASONAL_STRENGTH_THRESHOLD = 0.64
_MAX_ORDER = 5
_MAX_MODELS = 60


def auto_fit(series: TimeSeries) -> ArimaModel:
    """Select and fit the AICc-minimal ARIMA/SARIMA specification."""
    n = len(series.values)
    s = series.frequency
    seasonal = s > 1 and n >= 2 * s + 8
    if n < 20:
        raise TooFewObservationsError("auto_fit needs at least 20 observations")

    D = 0
    if seasonal and seasonal_strength(series.values, s) > \
            SEASONAL_STRENGTH_THRESHOLD:
        D = 1
    x = list(series.values)
    if D:
        x = diff_values(x, s, 1)
    d = ndiffs(x) if len(x) >= 8 else 0

    tried = {}

    def try_spec(p, q, P, Q):
        key = (p, q, P, Q)
        if key in tried:
            return tried[key]
        try:
            spec = ArimaSpec(p=p, d=d, q=q, P=P, D=D, Q=Q,
                             s=s if (P or Q or D) else 1,
                             include_mean=(d == 0 and D == 0))
            model = fit_arima(series, spec)
            tried[key] = model
        except DataDeskError:
            tried[key] = None
        return tried[key]

    pq_starts = [(0, 0), (1, 0), (0, 1), (2, 2)]
    PQ_starts = [(0, 0), (1, 0), (0, 1)] if seasonal else [(0, 0)]

    best = None
    for p, q in pq_starts:
        for P, Q in PQ_starts:
            model = try_spec(p, q, P, Q)
            if model is not None and (best is None or model.aicc < best.aicc):
                best = model
    if best is None:
        raise NonConvergenceError("no candidate model could be fitted")

    improved = True
    while improved and len(tried) < _MAX_MODELS:
        improved = False
        spec = best.spec
        current = (spec.p, spec.q, spec.P, spec.Q)
        moves = []
        for axis in range(4):
            for delta in (-1, 1):
                cand = list(current)
                cand[axis] += delta
                if cand[axis] < 0 or cand[axis] > _MAX_ORDER:
                    continue
                if not seasonal and axis >= 2:
                    continue
                if sum(cand) > 10:
                    continue
                moves.append(tuple(cand))
        for move in moves:
            model = try_spec(*move)
            if model is not None and model.aicc < best.aicc:
                best = model
                improved = True
    return best
