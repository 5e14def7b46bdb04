"""Point forecasts and prediction intervals for fitted ARIMA models.

Point forecasts iterate the ARMA recursion on the differenced scale with
future innovations at zero, then invert the differencing.  The forecast
error variance at step h is sigma2 * sum_{j<h} psi_j^2 where psi are the
MA(infinity) weights of the full integrated model; intervals are
point +/- z * sqrt(var).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import HorizonOutOfRangeError
from ..special import norm_quantile
from .arima import ArimaModel

DEFAULT_LEVELS = (0.80, 0.95)


@dataclass(frozen=True)
class Forecast:
    horizon: int
    point: tuple
    #: level -> (lower tuple, upper tuple)
    intervals: dict


def _integration_poly(d: int, D: int, s: int) -> np.ndarray:
    """(1-B)^d (1-B^s)^D as dense coefficients [1, c1, c2, ...]."""
    poly = np.array([1.0])
    for _ in range(d):
        poly = np.convolve(poly, [1.0, -1.0])
    seasonal = np.zeros(s + 1)
    seasonal[0], seasonal[s] = 1.0, -1.0
    for _ in range(D):
        poly = np.convolve(poly, seasonal)
    return poly


def psi_weights(model: ArimaModel, n_weights: int) -> np.ndarray:
    """MA(infinity) weights of the integrated model, psi_0 = 1."""
    spec = model.spec
    phi_star_poly = np.convolve(
        np.concatenate(([1.0], -model.phi_full)),
        _integration_poly(spec.d, spec.D, spec.s),
    )
    phi_star = -phi_star_poly[1:]
    theta = model.theta_full
    psi = np.zeros(n_weights)
    psi[0] = 1.0
    for j in range(1, n_weights):
        acc = theta[j - 1] if j - 1 < len(theta) else 0.0
        for i in range(1, min(j, len(phi_star)) + 1):
            acc += phi_star[i - 1] * psi[j - i]
        psi[j] = acc
    return psi


def forecast(model: ArimaModel, horizon: int,
             levels=DEFAULT_LEVELS) -> Forecast:
    """Forecast `horizon` steps ahead with prediction intervals."""
    if horizon < 1:
        raise HorizonOutOfRangeError("horizon must be >= 1")
    for level in levels:
        if not 0.0 < level < 1.0:
            raise HorizonOutOfRangeError(f"invalid interval level {level}")

    spec = model.spec
    mean = model.mean if model.mean is not None else 0.0
    phi = model.phi_full
    theta = model.theta_full

    # ARMA recursion on the differenced scale, future innovations at zero.
    w_hist = [v - mean for v in model.diff_tail]
    e_hist = list(model.residuals)
    w_fc = []
    for h in range(1, horizon + 1):
        acc = 0.0
        for i in range(1, len(phi) + 1):
            past = w_fc[h - 1 - i] if h - i >= 1 else (
                w_hist[h - i - 1] if len(w_hist) >= i - h + 1 else 0.0
            )
            acc += phi[i - 1] * past
        for j in range(h, len(theta) + 1):
            idx = len(e_hist) - (j - h) - 1
            if idx >= 0:
                acc += theta[j - 1] * e_hist[idx]
        w_fc.append(acc)

    # Invert differencing: x_t = w_t + sum_k c_k x_{t-k}.
    int_poly = _integration_poly(spec.d, spec.D, spec.s)
    c = -int_poly[1:]
    x_ext = list(model.last_values)
    point = []
    for h in range(horizon):
        v = w_fc[h] + mean
        for k in range(1, len(c) + 1):
            if len(x_ext) >= k:
                v += c[k - 1] * x_ext[-k]
        x_ext.append(v)
        point.append(v)

    psi = psi_weights(model, horizon)
    variances = model.sigma2 * np.cumsum(psi * psi)
    half_widths = np.sqrt(variances)

    intervals = {}
    for level in sorted(levels):
        z = norm_quantile(0.5 + level / 2.0)
        lower = tuple(p - z * hw for p, hw in zip(point, half_widths))
        upper = tuple(p + z * hw for p, hw in zip(point, half_widths))
        intervals[level] = (lower, upper)
    return Forecast(horizon=horizon, point=tuple(point), intervals=intervals)
