"""Dunkl transform of radial profiles (normalized Hankel transform) and the rank-one transform.

The radial transform is

    g(s) = c_lam * int_0^inf f0(r) j_lam(r s) r^(2 lam + 1) dr,

computed as a dense product with the matrix ``K[i, j] = j_lam(r_i s_j)``.  The
map is an involution on radial data, so the inverse uses the same matrix with
the roles of the grids swapped.
"""
from __future__ import annotations

import threading
from collections import OrderedDict
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidParameterError, ResolutionError
from .measure import (RadialGrid, RadialProfile, SpectralProfile, WeightParams,
                      measure_weights)
from .specfun import normalized_bessel

_ROW_BLOCK = 256
_CACHE_SIZE = 6
_cache: "OrderedDict[tuple, np.ndarray]" = OrderedDict()
_cache_lock = threading.Lock()


def set_kernel_cache_size(n: int) -> None:
    global _CACHE_SIZE
    with _cache_lock:
        _CACHE_SIZE = max(1, int(n))
        while len(_cache) > _CACHE_SIZE:
            _cache.popitem(last=False)


def clear_kernel_cache() -> None:
    with _cache_lock:
        _cache.clear()


def _build_kernel(rg: RadialGrid, sg: RadialGrid, lam: float) -> np.ndarray:
    r, s = rg.nodes, sg.nodes
    K = np.empty((r.size, s.size))
    for i in range(0, r.size, _ROW_BLOCK):
        K[i:i + _ROW_BLOCK] = normalized_bessel(lam, np.outer(r[i:i + _ROW_BLOCK], s).ravel()).reshape(-1, s.size)
    K.setflags(write=False)
    return K


def kernel_matrix(rg: RadialGrid, sg: RadialGrid, lam: float) -> np.ndarray:
    """``K[i, j] = j_lam(r_i s_j)``, cached.

    Grids with the same panel shape and the same product ``R_r * R_s`` give the
    same matrix, so dilated spaces share one entry.
    """
    swap = sg.shape_key < rg.shape_key
    if swap:
        rg, sg = sg, rg
    key = (rg.shape_key, sg.shape_key, round(rg.R * sg.R, 9), float(lam))
    with _cache_lock:
        K = _cache.get(key)
        if K is not None:
            _cache.move_to_end(key)
        else:
            K = _build_kernel(rg, sg, lam)
            _cache[key] = K
            while len(_cache) > _CACHE_SIZE:
                _cache.popitem(last=False)
    return K.T if swap else K


def check_resolution(src: RadialGrid, dst: RadialGrid) -> None:
    cap = src.spectral_cap
    if dst.R > cap * (1 + 1e-9):
        raise ResolutionError(f"output radius {dst.R:g} exceeds resolvable cap {cap:g} "
                              f"(0.8 * {src.size} nodes / R={src.R:g})")


def hankel_apply(values: np.ndarray, src: RadialGrid, dst: RadialGrid, lam: float) -> np.ndarray:
    """Apply the order-``lam`` normalized transform to samples on ``src``.

    ``values`` may be 1-D or 2-D (one row per function).  Returns samples on ``dst``.
    """
    check_resolution(src, dst)
    w = measure_weights(src, lam)
    K = kernel_matrix(dst, src, lam)  # rows indexed by output nodes
    return (np.asarray(values) * w) @ K.T


def dunkl_transform_radial(f: RadialProfile, strict: Optional[bool] = None) -> SpectralProfile:
    """Dunkl transform of a radial profile, sampled on ``f.dual_grid``."""
    lam = f.params.lambda_k
    if f.spectrum is not None:
        return SpectralProfile(f.dual_grid, f.spectrum, f.params, f.grid, f.band_limit, f.label, derived=True)
    f.require_tail("dunkl_transform_radial", strict)
    g = hankel_apply(f.samples, f.grid, f.dual_grid, lam)
    return SpectralProfile(f.dual_grid, g, f.params, f.grid, f.band_limit, f.label, derived=True)


def inverse_dunkl_transform_radial(g: SpectralProfile, strict: Optional[bool] = None) -> RadialProfile:
    """Inverse transform; for radial data it is the same operator as the forward one."""
    g.require_tail("inverse_dunkl_transform_radial", strict)
    f = hankel_apply(g.samples, g.grid, g.dual_grid, g.params.lambda_k)
    return RadialProfile(g.dual_grid, f, g.params, g.grid, g.samples, g.band_limit, g.label, derived=True)


def inverse_many(spectra: np.ndarray, sg: RadialGrid, rg: RadialGrid, lam: float) -> np.ndarray:
    """Inverse transform of several spectra at once (rows of ``spectra``)."""
    return hankel_apply(np.atleast_2d(spectra), sg, rg, lam)


def dunkl_transform_rank1(f_even: RadialProfile, f_odd: RadialProfile, k: float,
                          strict: Optional[bool] = None) -> Tuple[SpectralProfile, SpectralProfile]:
    """Rank-one Dunkl transform of ``f = f_even + f_odd`` on the real line.

    Both parts are given by their values on ``x > 0``.  The even part goes
    through the order-``lam`` transform; the odd part becomes
    ``-i y H_{lam+1}[f_odd(x)/x](y)``, which follows from the odd half of the
    kernel ``i xy/(2(lam+1)) j_{lam+1}(xy)`` and the conjugated kernel in the
    forward transform.  Returns ``(G_even, G_odd)`` with ``G_odd`` purely imaginary.
    """
    k = float(k)
    if not np.isfinite(k) or k < 0:
        raise InvalidParameterError(f"multiplicity k must be >= 0, got {k}")
    params = WeightParams.rank1(k)
    for part in (f_even, f_odd):
        if part.params != params:
            raise InvalidParameterError(f"profiles must carry rank-one weight params for k={k}")
    if f_odd.grid is not f_even.grid or f_odd.dual_grid is not f_even.dual_grid:
        raise InvalidParameterError("even and odd parts must share grids")
    lam = params.lambda_k
    G_even = dunkl_transform_radial(f_even, strict)
    f_odd.require_tail("dunkl_transform_rank1", strict)
    sg = f_even.dual_grid
    h = hankel_apply(f_odd.samples / f_odd.grid.nodes, f_odd.grid, sg, lam + 1.0)
    G_odd = SpectralProfile(sg, -1j * sg.nodes * h, params, f_odd.grid, None, f_odd.label, derived=True)
    return G_even, G_odd


def inverse_dunkl_transform_rank1(G_even: SpectralProfile, G_odd: SpectralProfile,
                                  k: float) -> Tuple[RadialProfile, RadialProfile]:
    """Inverse of :func:`dunkl_transform_rank1`; the odd part is ``i x H_{lam+1}[G_odd(y)/y](x)``."""
    params = WeightParams.rank1(k)
    lam = params.lambda_k
    f_even = inverse_dunkl_transform_radial(G_even)
    rg = G_odd.dual_grid
    h = hankel_apply(G_odd.samples / G_odd.grid.nodes, G_odd.grid, rg, lam + 1.0)
    f_odd = RadialProfile(rg, 1j * rg.nodes * h, params, G_odd.grid, None, None, G_odd.label, derived=True)
    return f_even, f_odd
