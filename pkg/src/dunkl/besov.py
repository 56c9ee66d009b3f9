"""Besov norms through moduli, approximation errors and dyadic blocks.

All characterizations share the shape ``||f||_p + (sum_j w_j a_j^theta)^(1/theta)``
with nonnegative terms ``a_j``; ``theta = inf`` replaces the sum by a supremum.
Dyadic sums run over ``j = 0..J`` (or ``1..J``, ``-J..J``), see :class:`BesovMethod`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidParameterError
from .measure import RadialProfile, _check_p, lp_norm_of_samples, measure_weights
from .multipliers import smooth_cutoff
from .smoothness import (_memo, _spectrum, approximation_errors, laplacian_of_cutoff_norms, moduli,
                         multiplier_norms, norm, vp_errors)
from .transform import inverse_many

DEFAULT_J = 10


class BesovMethod(str, enum.Enum):
    DEFINITION = "DEFINITION"
    DYADIC_MODULUS = "DYADIC_MODULUS"
    BEST_APPROX = "BEST_APPROX"
    VP_TAIL = "VP_TAIL"
    DYADIC_BLOCK = "DYADIC_BLOCK"
    HOMOGENEOUS_BLOCK = "HOMOGENEOUS_BLOCK"
    LAPLACIAN_APPROX = "LAPLACIAN_APPROX"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class BesovParams:
    """Smoothness ``s``, integrability ``p``, summability ``theta``, modulus order ``r``, depth ``J``."""

    s: float
    p: float
    theta: float
    r: float
    J: int = DEFAULT_J

    def __post_init__(self):
        if not self.s > 0:
            raise InvalidParameterError("s must be > 0")
        if not 1 < self.p < math.inf:
            raise InvalidParameterError("p must lie in (1, inf)")
        if not self.theta > 0:
            raise InvalidParameterError("theta must be > 0")
        if math.isinf(self.theta):
            if self.r < self.s:
                raise InvalidParameterError("theta = inf needs r >= s")
        elif not self.r > self.s:
            raise InvalidParameterError("needs r > s")
        if int(self.J) != self.J or self.J < 1:
            raise InvalidParameterError("J must be a positive integer")

    def to_dict(self) -> dict:
        return {"s": self.s, "p": self.p, "theta": self.theta, "r": self.r, "J": int(self.J)}


def _combine(weights: np.ndarray, terms: np.ndarray, theta: float) -> float:
    """``(sum w_j a_j^theta)^(1/theta)``, or ``sup w_j a_j`` for ``theta = inf`` (weights as ``2^{s j}``)."""
    terms = np.asarray(terms, dtype=float)
    if math.isinf(theta):
        return float(np.max(weights * terms)) if terms.size else 0.0
    return float(np.sum((weights * terms) ** theta)) ** (1.0 / theta)


def block_symbol(s: np.ndarray, j: int) -> np.ndarray:
    """``theta_j`` symbol: ``eta(s / 2^j) - eta(s / 2^(j-1))``."""
    return smooth_cutoff(s * 2.0 ** (-j)) - smooth_cutoff(s * 2.0 ** (1 - j))


def block_norms(f: RadialProfile, js: Sequence[int], p: float) -> np.ndarray:
    """``||theta_j f||_p`` for each ``j`` (memoized)."""
    memo = _memo(f)
    js = [int(j) for j in js]
    todo = [j for j in js if ("block", j, float(p)) not in memo]
    if todo:
        s = f.dual_grid.nodes
        vals = multiplier_norms(f, np.stack([block_symbol(s, j) for j in todo]), p)
        for j, v in zip(todo, vals):
            memo[("block", j, float(p))] = float(v)
    return np.array([memo[("block", j, float(p))] for j in js])


def besov_norm(f: RadialProfile, bp: BesovParams, method="DYADIC_MODULUS", approximant: str = "vallee-poussin") -> float:
    """Besov norm of ``f`` by one of the :class:`BesovMethod` characterizations.

    ``DEFINITION`` evaluates ``int_0^1 (t^-s omega_r(f,t))^theta dt/t`` as its
    dyadic Riemann sum ``ln 2 * sum_j (2^{sj} omega_r(f, 2^-j))^theta``;
    ``DYADIC_MODULUS`` drops the ``ln 2``.  ``approximant`` picks ``P_j`` for
    ``LAPLACIAN_APPROX``: ``"vallee-poussin"`` (``eta_j f``) or ``"near-best"``.
    """
    try:
        method = BesovMethod(method)
    except ValueError as e:
        raise InvalidParameterError(f"unknown Besov method {method!r}") from e
    s, p, th, r, J = bp.s, bp.p, bp.theta, bp.r, int(bp.J)
    base = norm(f, p)
    if method in (BesovMethod.DEFINITION, BesovMethod.DYADIC_MODULUS):
        js = np.arange(0, J + 1)
        w = moduli(f, r, 2.0 ** (-js), p)
        val = _combine(2.0 ** (s * js), w, th)
        if method == BesovMethod.DEFINITION and not math.isinf(th):
            val *= math.log(2.0) ** (1.0 / th)
        return base + val
    if method == BesovMethod.BEST_APPROX:
        js = np.arange(0, J + 1)
        return base + _combine(2.0 ** (s * js), approximation_errors(f, 2.0 ** js, p), th)
    if method == BesovMethod.VP_TAIL:
        js = np.arange(1, J + 1)
        return base + _combine(2.0 ** (s * js), vp_errors(f, 2.0 ** js, p), th)
    if method in (BesovMethod.DYADIC_BLOCK, BesovMethod.HOMOGENEOUS_BLOCK):
        js = np.arange(1 if method == BesovMethod.DYADIC_BLOCK else -J, J + 1)
        return base + _combine(2.0 ** (s * js), block_norms(f, js, p), th)
    if approximant not in ("vallee-poussin", "near-best"):
        raise InvalidParameterError(f"unknown approximant {approximant!r}")
    js = np.arange(1, J + 1)
    L = laplacian_of_cutoff_norms(f, 2.0 ** js, r, p, approximant)
    return base + _combine(2.0 ** ((s - r) * js), L, th)


def lipschitz_grid(J: int = DEFAULT_J, t_max: float = 16.0, divisions: int = 4) -> np.ndarray:
    """Geometric ``t``-grid from ``t_max`` down to ``2^-J`` with ``divisions`` points per octave."""
    top = math.log2(t_max)
    n = int(round((top + J) * divisions))
    return 2.0 ** (top - np.arange(n + 1) / divisions)


def lipschitz_norm(f: RadialProfile, s: float, p: float, J: int = DEFAULT_J) -> float:
    """``||f||_p + sup_t t^-s omega_{s+1}(f, t)_p`` over :func:`lipschitz_grid`."""
    if not s > 0:
        raise InvalidParameterError("s must be > 0")
    _check_p(p)
    ts = lipschitz_grid(J)
    w = moduli(f, s + 1.0, ts, p)
    return norm(f, p) + float(np.max(ts ** (-s) * w))


def spectral_besov_norm(f: RadialProfile, s: float, theta: float, J: int = DEFAULT_J) -> float:
    """``||F f||_2 + (sum_{j=0..J} (2^{sj} ||F f chi_j||_2)^theta)^(1/theta)`` with dyadic annuli ``chi_j``."""
    from .inequalities import dyadic_spectral_norms
    blocks = dict(dyadic_spectral_norms(f, 2.0))
    js = np.arange(0, J + 1)
    vals = np.array([blocks.get(int(j), 0.0) for j in js])
    return norm(f, 2.0) + _combine(2.0 ** (s * js), vals, theta)


def titchmarsh_side(f: RadialProfile, s: float) -> float:
    """``||F f||_2 + sup_{j >= 0} 2^{sj} ||F f chi_j||_2``."""
    from .inequalities import dyadic_spectral_norms
    vals = [2.0 ** (s * j) * v for j, v in dyadic_spectral_norms(f, 2.0) if j >= 0]
    return norm(f, 2.0) + max(vals + [0.0])


def square_function_norm(f: RadialProfile, p: float, J: int = DEFAULT_J) -> float:
    """``|| (sum_{|j|<=J} |theta_j f|^2)^(1/2) ||_p`` (Littlewood-Paley square function)."""
    _check_p(p)
    js = np.arange(-J, J + 1)
    if float(p) == 2.0:
        return float(np.sqrt(np.sum(block_norms(f, js, 2.0) ** 2)))
    G = _spectrum(f)
    lam = f.params.lambda_k
    M = np.stack([block_symbol(G.s, int(j)) for j in js]) * G.samples
    out = inverse_many(M, G.grid, G.dual_grid, lam)
    sq = np.sqrt(np.sum(np.abs(out) ** 2, axis=0))
    return float(lp_norm_of_samples(sq, measure_weights(f.grid, lam), p))
