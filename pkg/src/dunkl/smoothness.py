"""Moduli of smoothness, band-limited approximation and the K-functional realization.

Norms of multiplier outputs ``F^{-1}(m F f)`` are computed in two ways:

* ``p = 2``: spectrally, ``||m F f||_2`` (Plancherel), which is exact on the grid;
* ``p != 2``: spatially, after a batched inverse transform.

Results are memoized per profile, keyed by the multiplier and ``p``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidParameterError
from .measure import (RadialProfile, _check_p, interval_power_integral, lp_norm_of_samples,
                      measure_weights, weighted_lp_norm)
from .multipliers import smooth_cutoff
from .specfun import one_minus_bessel
from .transform import dunkl_transform_radial, inverse_many

T_GRID_STEPS = 16
T_GRID_DIVISIONS = 4


def _memo(f: RadialProfile) -> dict:
    return f.__dict__.setdefault("_smoothness_memo", {})


def _spectrum(f: RadialProfile):
    G = f.__dict__.get("_spectrum_cache")
    if G is None:
        G = dunkl_transform_radial(f)
        f.__dict__["_spectrum_cache"] = G
    return G


def multiplier_norms(f: RadialProfile, symbols: np.ndarray, p: float) -> np.ndarray:
    """``||F^{-1}(m_i F f)||_p`` for each row ``m_i`` of ``symbols`` (sampled on the spectral grid)."""
    p = _check_p(p)
    G = _spectrum(f)
    M = np.atleast_2d(symbols) * G.samples
    lam = f.params.lambda_k
    if p == 2.0:
        return lp_norm_of_samples(M, measure_weights(G.grid, lam), 2.0)
    out = inverse_many(M, G.grid, G.dual_grid, lam)
    return lp_norm_of_samples(out, measure_weights(f.grid, lam), p)


def norm(f: RadialProfile, p: float) -> float:
    """``||f||_p`` (spectral at ``p = 2``), memoized."""
    key = ("norm", float(p))
    memo = _memo(f)
    if key not in memo:
        if float(p) == 2.0:
            memo[key] = float(multiplier_norms(f, np.ones(f.dual_grid.size), 2.0)[0])
        else:
            memo[key] = weighted_lp_norm(f, p)
    return memo[key]


def difference_symbol(s: np.ndarray, lam: float, t: float, m: float) -> np.ndarray:
    return np.clip(one_minus_bessel(lam, t * s), 0.0, None) ** (0.5 * m)


def difference_norms(f: RadialProfile, ts: Sequence[float], m: float, p: float) -> np.ndarray:
    """``||Delta_t^m f||_p`` for every ``t`` in ``ts`` (batched, memoized)."""
    memo = _memo(f)
    ts = [float(t) for t in ts]
    todo = [t for t in ts if ("diff", float(m), t, float(p)) not in memo]
    if todo:
        s = f.dual_grid.nodes
        lam = f.params.lambda_k
        sym = np.stack([difference_symbol(s, lam, t, m) for t in todo])
        vals = multiplier_norms(f, sym, p)
        for t, v in zip(todo, vals):
            memo[("diff", float(m), t, float(p))] = float(v)
    return np.array([memo[("diff", float(m), t, float(p))] for t in ts])


def t_grid(delta: float, steps: Optional[int] = None, divisions: Optional[int] = None) -> np.ndarray:
    """Geometric grid ``delta * 2^(-i/divisions)``, ``i = 0..steps`` (module defaults when omitted)."""
    steps = T_GRID_STEPS if steps is None else steps
    divisions = T_GRID_DIVISIONS if divisions is None else divisions
    return delta * 2.0 ** (-np.arange(steps + 1) / divisions)


def modulus(f: RadialProfile, m: float, delta: float, p: float, steps: Optional[int] = None,
            divisions: Optional[int] = None) -> float:
    """``omega_m(f, delta)_p``: max of ``||Delta_t^m f||_p`` over a geometric grid in ``(0, delta]``.

    The default grid is ``delta * 2^(-i/4)``, ``i = 0..16``; ``steps=32, divisions=8``
    gives the doubled grid used in refinement studies.
    """
    if not m > 0 or not delta > 0:
        raise InvalidParameterError("m and delta must be positive")
    _check_p(p)
    return float(difference_norms(f, t_grid(delta, steps, divisions), m, p).max())


def moduli(f: RadialProfile, m: float, deltas: Sequence[float], p: float, steps: Optional[int] = None,
           divisions: Optional[int] = None) -> np.ndarray:
    """``modulus`` for several ``delta`` at once, sharing one batched evaluation."""
    grids = [t_grid(d, steps, divisions) for d in deltas]
    allt = sorted({float(t) for g in grids for t in g})
    difference_norms(f, allt, m, p)
    return np.array([difference_norms(f, g, m, p).max() for g in grids])


@dataclass(frozen=True, eq=False)
class Approximant:
    """A band-limited approximant ``g`` of type ``sigma`` with ``error = ||f - g||_p``."""

    g: RadialProfile
    error: float
    method: str
    sigma: float
    p: float


def spectral_tail(f: RadialProfile, sigma: float) -> float:
    """``(int_{s > sigma} |F f|^2 dmu)^(1/2)``, i.e. the exact ``E_sigma(f)_2``."""
    G = _spectrum(f)
    key = ("tail", float(sigma))
    memo = _memo(f)
    if key not in memo:
        val = interval_power_integral(G.samples, G.grid, f.params.lambda_k, sigma, math.inf, 2.0)
        memo[key] = math.sqrt(max(val, 0.0))
    return memo[key]


def best_approx_l2(f: RadialProfile, sigma: float) -> Approximant:
    """Exact ``L^2`` best approximation by type ``sigma``: spectral truncation at ``sigma``."""
    if not sigma > 0:
        raise InvalidParameterError("sigma must be positive")
    G = _spectrum(f)
    vals = np.where(G.s <= sigma, G.samples, 0.0)
    g = RadialProfile(f.grid, inverse_many(vals, G.grid, G.dual_grid, f.params.lambda_k)[0], f.params,
                      f.dual_grid, vals, sigma, f.label, derived=True)
    return Approximant(g, spectral_tail(f, sigma), "spectral-truncation", float(sigma), 2.0)


def cutoff_symbol(s: np.ndarray, sigma: float) -> np.ndarray:
    """``eta(s / sigma)``: 1 up to ``sigma/2``, 0 from ``sigma`` on."""
    return smooth_cutoff(s / sigma)


def vp_errors(f: RadialProfile, sigmas: Sequence[float], p: float) -> np.ndarray:
    """``||f - eta(./sigma) f||_p`` for each ``sigma`` (memoized)."""
    memo = _memo(f)
    sigmas = [float(x) for x in sigmas]
    todo = [x for x in sigmas if ("vp", x, float(p)) not in memo]
    if todo:
        s = f.dual_grid.nodes
        sym = np.stack([1.0 - cutoff_symbol(s, x) for x in todo])
        for x, v in zip(todo, multiplier_norms(f, sym, p)):
            memo[("vp", x, float(p))] = float(v)
    return np.array([memo[("vp", x, float(p))] for x in sigmas])


def approximation_error(f: RadialProfile, sigma: float, p: float) -> tuple:
    """``(E, surrogate)``: exact ``E_sigma(f)_2`` at ``p = 2``, else ``||f - eta(./sigma) f||_p``.

    ``sigma = 0`` gives ``||f||_p`` (only the zero function has type 0).
    """
    if sigma == 0:
        return norm(f, p), False
    if float(p) == 2.0:
        return spectral_tail(f, sigma), False
    return float(vp_errors(f, [sigma], p)[0]), True


def approximation_errors(f: RadialProfile, sigmas: Sequence[float], p: float) -> np.ndarray:
    """Vectorized :func:`approximation_error` (values only)."""
    sig = [float(x) for x in sigmas]
    if float(p) == 2.0:
        return np.array([norm(f, 2) if x == 0 else spectral_tail(f, x) for x in sig])
    pos = [x for x in sig if x > 0]
    vals = dict(zip(pos, vp_errors(f, pos, p))) if pos else {}
    return np.array([norm(f, p) if x == 0 else vals[x] for x in sig])


def near_best_approx(f: RadialProfile, j: int, p: float) -> Approximant:
    """``eta_j f`` (type ``2^j``) with ``error = ||f - eta_j f||_p``."""
    if int(j) != j:
        raise InvalidParameterError("j must be an integer")
    sigma = 2.0 ** j
    G = _spectrum(f)
    vals = cutoff_symbol(G.s, sigma) * G.samples
    g = RadialProfile(f.grid, inverse_many(vals, G.grid, G.dual_grid, f.params.lambda_k)[0], f.params,
                      f.dual_grid, vals, sigma, f.label, derived=True)
    return Approximant(g, float(vp_errors(f, [sigma], p)[0]), "vallee-poussin", sigma, float(p))


def laplacian_of_cutoff_norms(f: RadialProfile, sigmas: Sequence[float], r: float, p: float,
                              method: str = "vallee-poussin") -> np.ndarray:
    """``||(-Delta)^{r/2} P_sigma f||_p`` where ``P_sigma`` is ``eta(./sigma)`` or truncation at ``sigma``."""
    memo = _memo(f)
    sig = [float(x) for x in sigmas]
    key = lambda x: ("lapP", method, x, float(r), float(p))  # noqa: E731
    todo = [x for x in sig if key(x) not in memo]
    if todo:
        s = f.dual_grid.nodes
        if method == "vallee-poussin":
            sym = np.stack([s**r * cutoff_symbol(s, x) for x in todo])
        elif method == "near-best":
            sym = np.stack([np.where(s <= x, s**r, 0.0) for x in todo])
        else:
            raise InvalidParameterError(f"unknown approximant method {method!r}")
        if float(p) == 2.0 and method == "near-best":
            G = _spectrum(f)
            vals = [math.sqrt(interval_power_integral(G.s ** (r) * G.samples, G.grid, f.params.lambda_k,
                                                      0.0, x, 2.0)) for x in todo]
        else:
            vals = multiplier_norms(f, sym, p)
        for x, v in zip(todo, vals):
            memo[key(x)] = float(v)
    return np.array([memo[key(x)] for x in sig])


def realization_index(t: float) -> int:
    """``j = ceil(log2(1/t))``; values within rounding of an integer count as that integer."""
    x = math.log2(1.0 / t)
    return int(round(x)) if abs(x - round(x)) < 1e-9 else math.ceil(x)


def k_functional_realization(f: RadialProfile, t: float, r: float, p: float) -> float:
    """``||f - g||_p + t^r ||(-Delta)^{r/2} g||_p`` with ``g = eta_j f``, ``j = ceil(log2(1/t))``."""
    if not t > 0 or not r > 0:
        raise InvalidParameterError("t and r must be positive")
    sigma = 2.0 ** realization_index(t)
    err = float(vp_errors(f, [sigma], p)[0])
    lap = float(laplacian_of_cutoff_norms(f, [sigma], r, p)[0])
    return err + t**r * lap


def direct_difference_norm(f: RadialProfile, m: float, delta: float, p: float) -> float:
    """``||Delta_delta^m f||_p`` at the single step ``delta``."""
    return float(difference_norms(f, [delta], m, p)[0])
