"""ARIMA/SARIMA maximum-likelihood fitting.

The model (p,d,q)(P,D,Q)_s is estimated on the differenced series by
maximizing the exact Gaussian log-likelihood, computed with a Kalman
filter over the Harvey state-space form of the multiplied-out
ARMA(p + P*s, q + Q*s).  Stationarity and invertibility are guaranteed by
construction: coefficients are optimized through an unconstrained
partial-autocorrelation reparameterization (Monahan transform), searched
with derivative-free Nelder-Mead from multiple starts (zeros,
Hannan-Rissanen, perturbed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from ..errors import (
    InvalidSpecError,
    NonConvergenceError,
    TooFewObservationsError,
)
from .series import TimeSeries, diff_values

# Keep partial autocorrelations strictly inside (-1, 1) so every root stays
# strictly outside the unit circle.
_PACF_BOUND = 0.998


@dataclass(frozen=True)
class ArimaSpec:
    """Orders (p,d,q)(P,D,Q)_s; seasonal orders require s > 1."""

    p: int = 0
    d: int = 0
    q: int = 0
    P: int = 0
    D: int = 0
    Q: int = 0
    s: int = 1
    include_mean: bool = True

    def __post_init__(self):
        orders = (self.p, self.d, self.q, self.P, self.D, self.Q)
        if any(o < 0 for o in orders) or self.s < 1:
            raise InvalidSpecError("orders must be nonnegative, s >= 1")
        if self.p + self.q + self.P + self.Q > 10:
            raise InvalidSpecError("p+q+P+Q must be <= 10")
        if self.d + self.D > 3:
            raise InvalidSpecError("d+D must be <= 3")
        if self.s == 1 and (self.P or self.D or self.Q):
            raise InvalidSpecError("seasonal orders require s > 1")
        if (self.d or self.D) and self.include_mean:
            object.__setattr__(self, "include_mean", False)

    @property
    def n_coefficients(self) -> int:
        return self.p + self.q + self.P + self.Q

    def order_string(self) -> str:
        base = f"({self.p},{self.d},{self.q})"
        if self.s > 1:
            base += f"({self.P},{self.D},{self.Q})[{self.s}]"
        return base


@dataclass(frozen=True)
class ArimaModel:
    """A fitted model: coefficients, variance, fit measures and residuals."""

    spec: ArimaSpec
    ar: tuple
    ma: tuple
    sar: tuple
    sma: tuple
    mean: object  # float | None
    sigma2: float
    loglik: float
    aic: float
    aicc: float
    bic: float
    n_obs: int
    residuals: tuple
    #: tail of the undifferenced series, long enough to seed forecasts
    last_values: tuple
    #: tail of the differenced series (internal, for the forecast recursion)
    diff_tail: tuple = field(default=(), repr=False)

    @property
    def phi_full(self) -> np.ndarray:
        return expand_ar(self.ar, self.sar, self.spec.s)

    @property
    def theta_full(self) -> np.ndarray:
        return expand_ma(self.ma, self.sma, self.spec.s)


# --- polynomial helpers -----------------------------------------------------

def _seasonal_poly(coeffs, s: int, sign: float) -> np.ndarray:
    """1 + sign*c1*B^s + sign*c2*B^2s + ... as a dense coefficient array."""
    poly = np.zeros(len(coeffs) * s + 1)
    poly[0] = 1.0
    for i, c in enumerate(coeffs, start=1):
        poly[i * s] = sign * c
    return poly


def expand_ar(ar, sar, s: int) -> np.ndarray:
    """Full phi of the multiplied AR polynomials (x_t = sum phi_i x_{t-i} + ...)."""
    a = _seasonal_poly(ar, 1, -1.0)
    b = _seasonal_poly(sar, s, -1.0)
    prod = np.convolve(a, b)
    return -prod[1:]


def expand_ma(ma, sma, s: int) -> np.ndarray:
    """Full theta of the multiplied MA polynomials (e_t + sum theta_j e_{t-j})."""
    a = _seasonal_poly(ma, 1, 1.0)
    b = _seasonal_poly(sma, s, 1.0)
    prod = np.convolve(a, b)
    return prod[1:]


# --- stationarity-preserving reparameterization ----------------------------

def pacf_to_coeffs(pacf) -> np.ndarray:
    """Levinson-Durbin step: partial autocorrelations -> AR coefficients."""
    a = np.array([], dtype=float)
    for k, r in enumerate(pacf, start=1):
        prev = a
        a = np.empty(k)
        a[k - 1] = r
        for j in range(k - 1):
            a[j] = prev[j] - r * prev[k - 2 - j]
    return a


def coeffs_to_pacf(coeffs) -> np.ndarray:
    """Inverse Levinson-Durbin; raises ValueError outside the region."""
    a = np.asarray(coeffs, dtype=float)
    p = len(a)
    pacf = np.empty(p)
    for k in range(p, 0, -1):
        r = a[k - 1]
        if abs(r) >= 1.0:
            raise ValueError("coefficients outside the stationary region")
        pacf[k - 1] = r
        if k > 1:
            prev = np.empty(k - 1)
            for j in range(k - 1):
                prev[j] = (a[j] + r * a[k - 2 - j]) / (1.0 - r * r)
            a = prev
    return pacf


def unconstrained_to_coeffs(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    pacf = _PACF_BOUND * z / np.sqrt(1.0 + z * z)
    return pacf_to_coeffs(pacf)


def coeffs_to_unconstrained(coeffs) -> np.ndarray:
    pacf = coeffs_to_pacf(coeffs) / _PACF_BOUND
    pacf = np.clip(pacf, -0.999, 0.999)
    return pacf / np.sqrt(1.0 - pacf * pacf)


# --- exact Gaussian likelihood via the Kalman filter ------------------------

def _state_matrices(phi: np.ndarray, theta: np.ndarray):
    p, q = len(phi), len(theta)
    r = max(p, q + 1)
    T = np.zeros((r, r))
    T[:p, 0] = phi
    T[:-1, 1:] = np.eye(r - 1)
    R = np.zeros(r)
    R[0] = 1.0
    R[1:q + 1] = theta
    return T, R


def _stationary_covariance(T: np.ndarray, R: np.ndarray) -> np.ndarray:
    r = T.shape[0]
    rhs = np.outer(R, R).ravel()
    A = np.eye(r * r) - np.kron(T, T)
    return np.linalg.solve(A, rhs).reshape(r, r)


def arma_kalman(w: np.ndarray, phi: np.ndarray, theta: np.ndarray):
    """Run the exact-likelihood Kalman filter on a zero-mean ARMA series.

    Returns (loglik, sigma2_hat, residuals, next_state) with sigma2
    concentrated out (ML denominator n).  residuals are one-step errors on
    the innovation scale, v_t / sqrt(F_t).
    """
    n = len(w)
    T, R = _state_matrices(phi, theta)
    r = T.shape[0]
    P = _stationary_covariance(T, R)
    RR = np.outer(R, R)
    a = np.zeros(r)
    sumlog = 0.0
    ssq = 0.0
    resid = np.empty(n)
    # Once P converges the gain is constant; freezing it turns the rest of
    # the filter into cheap matrix-vector recursions without changing the
    # likelihood beyond the convergence threshold.
    steady = False
    F = P[0, 0]
    K = T @ P[:, 0] / F if F > 0 else np.zeros(r)
    sqrtF = math.sqrt(F) if F > 0 else 0.0
    for t in range(n):
        if not steady:
            F = P[0, 0]
            if not np.isfinite(F) or F <= 0:
                raise FloatingPointError("non-positive innovation variance")
            sqrtF = math.sqrt(F)
            K = T @ P[:, 0] / F
            P_next = T @ P @ T.T + RR - np.outer(K, K) * F
            P_next = 0.5 * (P_next + P_next.T)
            if abs(P_next[0, 0] - F) <= 1e-13 * F and \
                    np.max(np.abs(P_next - P)) <= 1e-13 * (1.0 + F):
                steady = True
            P = P_next
        v = w[t] - a[0]
        resid[t] = v / sqrtF
        sumlog += math.log(F)
        ssq += v * v / F
        a = T @ a + K * v
    sigma2 = ssq / n
    loglik = -0.5 * n * (math.log(2.0 * math.pi) + 1.0 + math.log(sigma2)) \
        - 0.5 * sumlog
    return loglik, sigma2, resid, a


# --- starting values --------------------------------------------------------

def hannan_rissanen(w: np.ndarray, p: int, q: int):
    """Two-stage long-AR regression estimate of ARMA(p, q) coefficients."""
    n = len(w)
    if p == 0 and q == 0:
        return np.array([]), np.array([])
    m = min(max(8, 2 * (p + q)), max(1, n // 4))
    # Stage 1: long AR for innovation estimates.
    e = np.zeros(n)
    if n > 2 * m:
        rows = np.column_stack([w[m - j - 1:n - j - 1] for j in range(m)])
        beta, *_ = np.linalg.lstsq(rows, w[m:], rcond=None)
        e[m:] = w[m:] - rows @ beta
    k = max(p, q)
    if n <= m + k + p + q + 2:
        return np.zeros(p), np.zeros(q)
    # Stage 2: regress on lags of w and estimated innovations.
    start = m + k
    cols = [w[start - j:n - j] for j in range(1, p + 1)]
    cols += [e[start - j:n - j] for j in range(1, q + 1)]
    X = np.column_stack(cols) if cols else np.empty((n - start, 0))
    beta, *_ = np.linalg.lstsq(X, w[start:], rcond=None)
    return beta[:p], beta[p:]


_ROOT_MARGIN = 1.0 + 1e-6


def _min_root_modulus(coeffs) -> float:
    if len(coeffs) == 0:
        return math.inf
    poly = np.concatenate(([1.0], -np.asarray(coeffs)))[::-1]
    roots = np.roots(poly)
    return float(np.min(np.abs(roots))) if len(roots) else math.inf


def enforce_root_margin(coeffs) -> np.ndarray:
    """Shrink partial autocorrelations until all roots clear the margin."""
    coeffs = np.asarray(coeffs, dtype=float)
    if _min_root_modulus(coeffs) > _ROOT_MARGIN:
        return coeffs
    pacf = coeffs_to_pacf(coeffs)
    for _ in range(200):
        pacf = pacf * 0.999
        coeffs = pacf_to_coeffs(pacf)
        if _min_root_modulus(coeffs) > _ROOT_MARGIN:
            return coeffs
    return pacf_to_coeffs(pacf * 0.0)


def _safe_unconstrained(coeffs, size: int) -> np.ndarray:
    if size == 0:
        return np.array([])
    try:
        z = coeffs_to_unconstrained(coeffs)
        if np.all(np.isfinite(z)):
            return z
    except ValueError:
        pass
    return np.zeros(size)


# --- fitting ----------------------------------------------------------------

def _unpack(params: np.ndarray, spec: ArimaSpec):
    p, q, P, Q = spec.p, spec.q, spec.P, spec.Q
    i = 0
    ar = unconstrained_to_coeffs(params[i:i + p]); i += p
    ma = -unconstrained_to_coeffs(params[i:i + q]); i += q
    sar = unconstrained_to_coeffs(params[i:i + P]); i += P
    sma = -unconstrained_to_coeffs(params[i:i + Q]); i += Q
    mean = params[i] if spec.include_mean else 0.0
    return ar, ma, sar, sma, mean


def fit_arima(series: TimeSeries, spec: ArimaSpec) -> ArimaModel:
    """Fit the given specification by exact maximum likelihood."""
    x = np.asarray(series.values, dtype=float)
    if spec.s > 1 and series.frequency != spec.s:
        raise InvalidSpecError(
            f"seasonal period {spec.s} does not match frequency "
            f"{series.frequency}"
        )
    d_len = spec.d + spec.D * spec.s
    needed = spec.p + spec.q + (spec.P + spec.Q) * spec.s + 5
    if len(x) - d_len < needed:
        raise TooFewObservationsError(
            f"need at least {d_len + needed} observations for "
            f"{spec.order_string()}"
        )

    w = np.asarray(diff_values(x, 1, spec.d) if spec.d else x)
    if spec.D:
        w = np.asarray(diff_values(w, spec.s, spec.D))
    n = len(w)

    def objective(params):
        try:
            ar, ma, sar, sma, mean = _unpack(params, spec)
            phi = expand_ar(ar, sar, spec.s)
            theta = expand_ma(ma, sma, spec.s)
            ll, _, _, _ = arma_kalman(w - mean, phi, theta)
            return -ll
        except (FloatingPointError, np.linalg.LinAlgError, ValueError,
                OverflowError):
            return 1e12

    n_shape = spec.n_coefficients
    n_params = n_shape + (1 if spec.include_mean else 0)
    mean0 = float(np.mean(w))

    starts = []
    zero_start = np.zeros(n_params)
    if spec.include_mean:
        zero_start[-1] = mean0
    starts.append(zero_start)
    if n_shape:
        hr_ar, hr_ma = hannan_rissanen(w - mean0, spec.p + spec.P * spec.s,
                                       spec.q + spec.Q * spec.s)
        hr = np.zeros(n_params)
        hr[:spec.p] = _safe_unconstrained(hr_ar[:spec.p], spec.p)
        off = spec.p
        hr[off:off + spec.q] = _safe_unconstrained(-hr_ma[:spec.q], spec.q)
        off += spec.q
        if spec.P:
            sar0 = hr_ar[spec.s - 1::spec.s][:spec.P] if len(hr_ar) >= spec.s \
                else np.zeros(spec.P)
            hr[off:off + spec.P] = _safe_unconstrained(sar0, spec.P)
        off += spec.P
        if spec.Q:
            sma0 = -hr_ma[spec.s - 1::spec.s][:spec.Q] if len(hr_ma) >= spec.s \
                else np.zeros(spec.Q)
            hr[off:off + spec.Q] = _safe_unconstrained(sma0, spec.Q)
        if spec.include_mean:
            hr[-1] = mean0
        starts.append(hr)
        perturbed = hr.copy()
        perturbed[:n_shape] = perturbed[:n_shape] * 0.5 + 0.1
        starts.append(perturbed)

    best = None
    if n_params == 0:
        best = np.array([])
    else:
        for start in starts:
            res = minimize(objective, start, method="Nelder-Mead",
                           options={"maxiter": 400 * max(n_params, 1),
                                    "xatol": 1e-6, "fatol": 1e-8})
            if not np.isfinite(res.fun) or res.fun >= 1e12:
                continue
            if best is None or res.fun < best_fun:
                best, best_fun = res.x, res.fun
        if best is None:
            raise NonConvergenceError(
                f"optimizer failed for {spec.order_string()}"
            )

    ar, ma, sar, sma, mean = _unpack(best, spec)
    ar = enforce_root_margin(ar)
    ma = -enforce_root_margin(-np.asarray(ma))
    sar = enforce_root_margin(sar)
    sma = -enforce_root_margin(-np.asarray(sma))
    phi = expand_ar(ar, sar, spec.s)
    theta = expand_ma(ma, sma, spec.s)
    loglik, sigma2, resid, _ = arma_kalman(w - mean, phi, theta)
    if sigma2 <= 0:
        raise NonConvergenceError("non-positive innovation variance")

    k = n_shape + 1 + (1 if spec.include_mean else 0)
    aic = -2.0 * loglik + 2.0 * k
    aicc = aic + 2.0 * k * (k + 1) / (n - k - 1) if n - k - 1 > 0 else math.inf
    bic = -2.0 * loglik + k * math.log(n)

    p_full = max(len(phi), 1)
    tail_len = min(len(x), d_len + p_full)
    return ArimaModel(
        spec=spec,
        ar=tuple(ar), ma=tuple(ma), sar=tuple(sar), sma=tuple(sma),
        mean=float(mean) if spec.include_mean else None,
        sigma2=float(sigma2),
        loglik=float(loglik), aic=float(aic), aicc=float(aicc),
        bic=float(bic),
        n_obs=n,
        residuals=tuple(float(r) for r in resid),
        last_values=tuple(float(v) for v in x[-tail_len:]),
        diff_tail=tuple(float(v) for v in w[-min(n, p_full):]),
    )
