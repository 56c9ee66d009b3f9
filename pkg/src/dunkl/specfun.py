"""Normalized Bessel function, its complement ``1 - j``, and the rank-one Dunkl kernel.

The normalized Bessel function is ``j_lam(t) = 2**lam * Gamma(lam+1) * t**-lam * J_lam(t)``.
It is evaluated in three bands:

* ascending power series for ``t <= max(8, 2*lam)``,
* piecewise Chebyshev interpolation of scipy's ``jv`` up to the asymptotic band,
* the Hankel asymptotic expansion for ``t >= max(18, lam**2)``.

The per-order setup (series coefficients, Chebyshev tables, Hankel
coefficients) is cached, so evaluating millions of points for one order is cheap.
All functions accept scalars or arrays for ``t`` and return the same shape.
"""
from __future__ import annotations

import functools
import math

import numpy as np
from scipy import special

from .errors import InvalidParameterError

_EPS = 1e-17
_CHEB_DEGREE = 24
# Above this order the Chebyshev tables get long; fall back to jv.
_MAX_TABLE_ORDER = 12.0


def _check_order(lam: float) -> float:
    lam = float(lam)
    if not math.isfinite(lam) or lam <= -1.0:
        raise InvalidParameterError(f"Bessel order must be finite and > -1, got {lam}")
    return lam


def _check_argument(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)) or np.any(t < 0):
        raise InvalidParameterError("argument t must be finite and >= 0")
    return t


def series_switch(lam: float) -> float:
    """Upper end of the power-series band."""
    return max(8.0, 2.0 * lam)


def asymptotic_start(lam: float) -> float:
    """Lower end of the Hankel-expansion band."""
    return max(18.0, lam * lam, series_switch(lam))


def log_normalization(lam: float) -> float:
    """``log(2**lam * Gamma(lam+1))``."""
    return lam * math.log(2.0) + float(special.gammaln(lam + 1.0))


class _OrderPlan:
    """Precomputed tables for one order."""

    def __init__(self, lam: float):
        self.lam = lam
        self.lognorm = log_normalization(lam)
        self.t_series = series_switch(lam)
        self.t_asym = asymptotic_start(lam)
        # series coefficients c_k = (-1/4)^k / (k! (lam+1)_k), k >= 1
        c = [1.0]
        for k in range(1, 400):
            c.append(c[-1] * (-0.25) / (k * (lam + k)))
            if abs(c[-1]) * self.t_series ** (2 * k) < _EPS * 1e-3:
                break
        self.series = np.array(c[1:])
        # Hankel coefficients a_k
        mu = 4.0 * lam * lam
        a = [1.0]
        for k in range(1, 80):
            a.append(a[-1] * (mu - (2 * k - 1) ** 2) / (k * 8.0))
        self.hankel = np.array(a)
        self.use_table = lam <= _MAX_TABLE_ORDER
        if self.use_table:
            lo = math.floor(self.t_series)
            hi = math.ceil(self.t_asym)
            self.cheb_lo = float(lo)
            self.cheb_n = max(1, hi - lo)
            x = np.cos(np.pi * (np.arange(_CHEB_DEGREE + 1) + 0.5) / (_CHEB_DEGREE + 1))
            rows = []
            for i in range(self.cheb_n):
                tt = lo + i + 0.5 * (x + 1.0)
                vals = np.exp(self.lognorm - lam * np.log(tt)) * special.jv(lam, tt)
                rows.append(np.polynomial.chebyshev.chebfit(x, vals, _CHEB_DEGREE))
            self.cheb = np.array(rows)

    def series_terms(self, tmax: float) -> int:
        """Number of series terms for absolute accuracy ~1e-17 relative to the leading term."""
        z = tmax * tmax
        lead = max(abs(self.series[0]) * z, 1e-300)
        for k, ck in enumerate(self.series, start=1):
            if abs(ck) * z**k < _EPS * min(lead, 1.0) and k > 1:
                return k
        return len(self.series)

    def hankel_terms(self, tmin: float) -> int:
        """Terms of the asymptotic series: stop once terms fall below ~1e-17 or start growing."""
        a = self.hankel
        prev = math.inf
        for k in range(1, len(a)):
            term = abs(a[k]) / tmin**k
            if term < _EPS or term > prev:
                return k
            prev = term
        return len(a)


@functools.lru_cache(maxsize=64)
def _plan(lam: float) -> _OrderPlan:
    return _OrderPlan(lam)


_SERIES_BUCKETS = (1e-4, 1e-2, 0.25, 1.0, 2.0, 4.0, 8.0)


def _series_tail(plan: _OrderPlan, t: np.ndarray) -> np.ndarray:
    """``j_lam(t) - 1`` from the ascending series, with Horner per magnitude bucket."""
    out = np.empty_like(t)
    edges = [0.0] + [b for b in _SERIES_BUCKETS if b < plan.t_series] + [plan.t_series]
    lo = 0.0
    for hi in edges[1:]:
        sel = (t >= lo) & (t <= hi) if lo == 0.0 else (t > lo) & (t <= hi)
        lo = hi
        if not sel.any():
            continue
        ts = t[sel]
        z = ts * ts
        n = plan.series_terms(hi)
        c = plan.series
        acc = np.full_like(ts, c[n - 1])
        for k in range(n - 2, -1, -1):
            acc = acc * z + c[k]
        out[sel] = acc * z
    return out


def _chebyshev_band(plan: _OrderPlan, t: np.ndarray) -> np.ndarray:
    u = t - plan.cheb_lo
    idx = np.minimum(np.floor(u).astype(np.intp), plan.cheb_n - 1)
    x = 2.0 * (u - idx) - 1.0
    C = plan.cheb
    b1 = np.zeros_like(t)
    b2 = np.zeros_like(t)
    x2 = 2.0 * x
    for k in range(C.shape[1] - 1, 0, -1):
        b1, b2 = C[idx, k] + x2 * b1 - b2, b1
    return C[idx, 0] + x * b1 - b2


def _asymptotic_band(plan: _OrderPlan, t: np.ndarray) -> np.ndarray:
    """``j_lam(t)`` from the Hankel expansion of ``J_lam``."""
    lam = plan.lam
    out = np.empty_like(t)
    edges = [plan.t_asym, 2 * plan.t_asym, 4 * plan.t_asym, 16 * plan.t_asym, math.inf]
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = (t >= lo) & (t < hi)
        if not sel.any():
            continue
        ts = t[sel]
        n = plan.hankel_terms(lo)
        a = plan.hankel[:n + 1]
        p_coef = a[0::2] * (-1.0) ** np.arange(len(a[0::2]))
        q_coef = a[1::2] * (-1.0) ** np.arange(len(a[1::2]))
        inv = 1.0 / ts
        w = inv * inv
        p = np.full_like(ts, p_coef[-1])
        for k in range(len(p_coef) - 2, -1, -1):
            p = p * w + p_coef[k]
        if len(q_coef):
            q = np.full_like(ts, q_coef[-1])
            for k in range(len(q_coef) - 2, -1, -1):
                q = q * w + q_coef[k]
            q *= inv
        else:
            q = np.zeros_like(ts)
        chi = ts - (0.5 * lam + 0.25) * math.pi
        amp = np.exp(plan.lognorm - lam * np.log(ts)) * np.sqrt(2.0 / (math.pi * ts))
        out[sel] = amp * (p * np.cos(chi) - q * np.sin(chi))
    return out


def _large_argument(plan: _OrderPlan, t: np.ndarray) -> np.ndarray:
    """``j_lam(t)`` for ``t`` above the series band."""
    out = np.empty_like(t)
    far = t >= plan.t_asym
    mid = ~far
    if mid.any():
        tm = t[mid]
        if plan.use_table:
            out[mid] = _chebyshev_band(plan, tm)
        else:
            out[mid] = np.exp(plan.lognorm - plan.lam * np.log(tm)) * special.jv(plan.lam, tm)
    if far.any():
        out[far] = _asymptotic_band(plan, t[far])
    return out


def _evaluate(lam, t, complement: bool):
    lam = _check_order(lam)
    tt = _check_argument(t)
    scalar = tt.ndim == 0
    shape = tt.shape
    tt = np.atleast_1d(tt).ravel()
    plan = _plan(lam)
    out = np.empty_like(tt)
    small = tt <= plan.t_series
    if small.any():
        tail = _series_tail(plan, tt[small])
        out[small] = -tail if complement else 1.0 + tail
    big = ~small
    if big.any():
        v = _large_argument(plan, tt[big])
        out[big] = 1.0 - v if complement else v
    return float(out[0]) if scalar else out.reshape(shape)


def normalized_bessel(lam: float, t):
    """Normalized Bessel function ``j_lam(t)``, with ``j_lam(0) = 1``.

    Parameters
    ----------
    lam : float
        Order, ``lam > -1``.
    t : float or array_like
        Nonnegative argument.
    """
    return _evaluate(lam, t, complement=False)


def one_minus_bessel(lam: float, t):
    """``1 - j_lam(t)`` without cancellation for small ``t``.

    Below the series switch the series of ``1 - j`` is summed directly, starting
    at the ``t**2 / (4 (lam+1))`` term.
    """
    return _evaluate(lam, t, complement=True)


def dunkl_kernel_rank1(k: float, x, y):
    """Rank-one Dunkl kernel ``e_k(x, y) = j_lam(xy) + i xy/(2(lam+1)) j_{lam+1}(xy)``.

    ``lam = k - 1/2``. For ``k = 0`` this is ``exp(i x y)``.
    """
    k = float(k)
    if not math.isfinite(k) or k < 0:
        raise InvalidParameterError(f"multiplicity k must be >= 0, got {k}")
    lam = k - 0.5
    t = np.asarray(x, dtype=float) * np.asarray(y, dtype=float)
    scalar = t.ndim == 0
    a = np.abs(t)
    even = normalized_bessel(lam, a)
    odd = t / (2.0 * (lam + 1.0)) * normalized_bessel(lam + 1.0, a)
    out = even + 1j * odd
    return complex(out) if scalar else out
