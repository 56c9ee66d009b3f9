"""Radial Fourier multipliers ``f -> F^{-1}(m(|.|) F f)``.

Symbols: generalized translation ``j_lam(t s)``, fractional Laplacian ``s^r``,
the smooth cutoff ``eta_j(s) = eta(2^-j s)``, Littlewood-Paley blocks
``theta_j = eta_j - eta_{j-1}``, fractional differences ``(1 - j_lam(t s))^(m/2)``,
tabulated custom symbols, and products of these.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import special

from .errors import InvalidParameterError, TruncationError
from .measure import TAIL_TOLERANCE, RadialProfile, SpectralProfile, interpolate_samples, weighted_lp_norm
from .specfun import normalized_bessel, one_minus_bessel
from .transform import dunkl_transform_radial, inverse_dunkl_transform_radial, inverse_many

KINDS = ("translation", "frac_laplacian", "cutoff_eta", "block_theta", "difference", "custom", "product")
BINOMIAL_TERMS = 64


def _h(u):
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def smooth_cutoff(s):
    """C-infinity cutoff: 1 on ``[0, 1/2]``, 0 on ``[1, inf)``, ``h(2-2s)/(h(2-2s)+h(2s-1))`` between."""
    x = np.abs(np.asarray(s, dtype=float))
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    a, b = _h(2.0 - 2.0 * x), _h(2.0 * x - 1.0)
    out = np.where(x <= 0.5, 1.0, np.where(x >= 1.0, 0.0, a / np.where(a + b > 0, a + b, 1.0)))
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class RadialSymbol:
    """A radial multiplier ``m(s)``; ``params`` depends on ``kind``.

    * ``translation``: ``{"t": t}``
    * ``frac_laplacian``: ``{"r": r}``
    * ``cutoff_eta`` / ``block_theta``: ``{"j": j}``
    * ``difference``: ``{"t": t, "m": m}``
    * ``custom``: ``{"s": [...], "values": [...]}`` linear interpolation, 0 beyond the table
    * ``product``: ``{"factors": [RadialSymbol, ...]}``
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameterError(f"unknown symbol kind {self.kind!r}")
        p = self.params
        need = {"translation": {"t"}, "frac_laplacian": {"r"}, "cutoff_eta": {"j"}, "block_theta": {"j"},
                "difference": {"t", "m"}, "custom": {"s", "values"}, "product": {"factors"}}[self.kind]
        if set(p) != need:
            raise InvalidParameterError(f"{self.kind} symbol needs parameters {sorted(need)}, got {sorted(p)}")
        if "t" in p and not (p["t"] >= 0 and math.isfinite(p["t"])):
            raise InvalidParameterError("t must be >= 0")
        if self.kind == "frac_laplacian" and not p["r"] > 0:
            raise InvalidParameterError("r must be > 0")
        if self.kind == "difference" and not p["m"] > 0:
            raise InvalidParameterError("m must be > 0")
        if "j" in p and int(p["j"]) != p["j"]:
            raise InvalidParameterError("j must be an integer")

    # constructors
    @classmethod
    def translation(cls, t):
        return cls("translation", {"t": float(t)})

    @classmethod
    def frac_laplacian(cls, r):
        return cls("frac_laplacian", {"r": float(r)})

    @classmethod
    def cutoff_eta(cls, j):
        return cls("cutoff_eta", {"j": int(j)})

    @classmethod
    def block_theta(cls, j):
        return cls("block_theta", {"j": int(j)})

    @classmethod
    def difference(cls, t, m):
        return cls("difference", {"t": float(t), "m": float(m)})

    @classmethod
    def custom(cls, s, values):
        return cls("custom", {"s": [float(x) for x in s], "values": [float(v) for v in values]})

    def __mul__(self, other: "RadialSymbol") -> "RadialSymbol":
        if not isinstance(other, RadialSymbol):
            return NotImplemented
        fa = self.params["factors"] if self.kind == "product" else [self]
        fb = other.params["factors"] if other.kind == "product" else [other]
        return RadialSymbol("product", {"factors": list(fa) + list(fb)})

    def __hash__(self):
        return hash(self.to_json_str())

    @property
    def support(self) -> Optional[float]:
        """Radius beyond which the symbol vanishes, if any."""
        if self.kind in ("cutoff_eta", "block_theta"):
            return 2.0 ** self.params["j"]
        if self.kind == "custom":
            return max(self.params["s"])
        if self.kind == "product":
            sup = [f.support for f in self.params["factors"] if f.support is not None]
            return min(sup) if sup else None
        return None

    def __call__(self, s, lam: float) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        p = self.params
        if self.kind == "translation":
            return normalized_bessel(lam, p["t"] * s)
        if self.kind == "frac_laplacian":
            return s ** p["r"]
        if self.kind == "cutoff_eta":
            return smooth_cutoff(s * 2.0 ** (-p["j"]))
        if self.kind == "block_theta":
            j = p["j"]
            return smooth_cutoff(s * 2.0 ** (-j)) - smooth_cutoff(s * 2.0 ** (1 - j))
        if self.kind == "difference":
            base = np.clip(one_minus_bessel(lam, p["t"] * s), 0.0, None)
            return base ** (0.5 * p["m"])
        if self.kind == "custom":
            return np.interp(s, p["s"], p["values"], left=p["values"][0], right=0.0)
        out = np.ones_like(s)
        for f in p["factors"]:
            out = out * f(s, lam)
        return out

    def to_dict(self) -> dict:
        if self.kind == "product":
            return {"kind": "product", "params": {"factors": [f.to_dict() for f in self.params["factors"]]}}
        return {"kind": self.kind, "params": dict(self.params)}

    def to_json_str(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "RadialSymbol":
        if d.get("kind") == "product":
            return cls("product", {"factors": [cls.from_dict(x) for x in d["params"]["factors"]]})
        return cls(d["kind"], dict(d.get("params", {})))


def _spectral_tail(values: np.ndarray, grid) -> float:
    a = np.abs(values)
    top = a.max() if a.size else 0.0
    if top == 0:
        return 0.0
    zone = grid.nodes >= 0.98 * grid.R
    return float(a[zone].max() / top)


def apply_symbol(f: RadialProfile, sym: RadialSymbol) -> RadialProfile:
    """``F^{-1}(sym * F f)``; the result keeps the exact spectrum."""
    G = dunkl_transform_radial(f)
    vals = sym(G.s, f.params.lambda_k) * G.samples
    bl = _min_limit(f.band_limit, sym.support)
    out = inverse_dunkl_transform_radial(SpectralProfile(G.grid, vals, G.params, G.dual_grid, None, f.label))
    return RadialProfile(out.grid, out.samples, f.params, f.dual_grid, vals, bl, f.label, derived=True)


def _min_limit(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def apply_symbols_many(f: RadialProfile, symbols: Sequence[RadialSymbol]) -> np.ndarray:
    """Samples of ``F^{-1}(m_i F f)`` for several symbols, one row each (batched inverse)."""
    G = dunkl_transform_radial(f)
    lam = f.params.lambda_k
    M = np.stack([sym(G.s, lam) for sym in symbols]) * G.samples
    return inverse_many(M, G.grid, G.dual_grid, lam)


PRODUCT_NODES = 512


def product_translation(f: RadialProfile, t: float, nodes: int = PRODUCT_NODES) -> np.ndarray:
    """Samples of ``T^t f`` by the product formula, without the spectrum.

    ``T^t f(x) = int_{-1}^{1} f(sqrt(x^2 + t^2 - 2 x t u)) dnu(u)`` with the
    probability measure ``dnu ~ (1 - u^2)^(lam - 1/2) du`` (Gauss-Jacobi nodes);
    ``lam = -1/2`` gives ``(f(|x - t|) + f(x + t)) / 2``.
    """
    lam = f.params.lambda_k
    x = f.grid.nodes
    if lam == -0.5:
        u, w = np.array([-1.0, 1.0]), np.array([0.5, 0.5])
    else:
        u, w = special.roots_jacobi(int(nodes), lam - 0.5, lam - 0.5)
        w = w / w.sum()
    r = np.sqrt(np.clip(x[:, None] ** 2 + t * t - 2.0 * t * x[:, None] * u[None, :], 0.0, None))
    return interpolate_samples(f.samples, f.grid, r) @ w


def translation(f: RadialProfile, t: float, method: str = "auto") -> RadialProfile:
    """Generalized translation ``T^t f`` (symbol ``j_lam(t s)``).

    ``method="spectral"`` applies the symbol to the transform; ``"product"``
    averages ``f`` in space by the product formula, which avoids spectral
    truncation for profiles with slowly decaying transforms.  ``"auto"`` uses
    the exact spectrum when ``f`` carries one and the product formula otherwise.
    """
    if t < 0:
        raise InvalidParameterError("t must be >= 0")
    if method == "auto":
        method = "spectral" if f.spectrum is not None else "product"
    if method == "spectral":
        return apply_symbol(f, RadialSymbol.translation(t))
    if method == "product":
        vals = f.samples if t == 0 else product_translation(f, t)
        return RadialProfile(f.grid, vals, f.params, f.dual_grid, None, f.band_limit, f.label, derived=True)
    raise InvalidParameterError(f"method must be 'auto', 'spectral' or 'product', got {method!r}")


def fractional_laplacian(f: RadialProfile, r: float, strict: bool = True) -> RadialProfile:
    """``(-Delta_k)^{r/2} f`` via the symbol ``s^r``.

    Raises ``TruncationError`` when ``s^r F f`` has not decayed at the end of
    the spectral grid (unless ``strict=False``).
    """
    if not r > 0:
        raise InvalidParameterError("r must be > 0")
    G = dunkl_transform_radial(f)
    if strict and f.band_limit is None:
        # spectral values at roundoff level are zero, not slow decay
        vals = np.where(np.abs(G.samples) > 64 * np.finfo(float).eps * np.abs(G.samples).max(), G.samples, 0.0)
        mag = _spectral_tail(G.s**r * vals, G.grid)
        if mag >= TAIL_TOLERANCE:
            raise TruncationError(f"s^{r} F f not decayed at the spectral radius {G.grid.R}", mag)
    return apply_symbol(f, RadialSymbol.frac_laplacian(r))


def band_projection(f: RadialProfile, j: int, kind: str = "eta") -> RadialProfile:
    """``eta_j f`` or ``theta_j f``; the result carries band limit ``2^j``."""
    if kind == "eta":
        return apply_symbol(f, RadialSymbol.cutoff_eta(j))
    if kind == "theta":
        return apply_symbol(f, RadialSymbol.block_theta(j))
    raise InvalidParameterError(f"kind must be 'eta' or 'theta', got {kind!r}")


def fractional_difference(f: RadialProfile, t: float, m: float) -> RadialProfile:
    """``Delta_t^m f = (I - T^t)^{m/2} f`` via the symbol ``(1 - j_lam(t s))^{m/2}``."""
    if not t > 0 or not m > 0:
        raise InvalidParameterError("t and m must be positive")
    return apply_symbol(f, RadialSymbol.difference(t, m))


def binomial_coefficients(alpha: float, n: int) -> np.ndarray:
    """``(-1)^s binom(alpha, s)`` for ``s = 0..n-1``."""
    s = np.arange(n)
    return (-1.0) ** s * special.binom(alpha, s)


def binomial_difference(f: RadialProfile, t: float, m: float, terms: int = BINOMIAL_TERMS):
    """Truncated series ``sum_{s<terms} (-1)^s binom(m/2, s) (T^t)^s f``.

    Returns ``(profile, remainder_bound)`` where the bound is
    ``sum_{s>=terms} |binom(m/2, s)| rho^s * ||F f||_2`` with ``rho = max |j_lam(t s)|``
    over the spectral support of ``f``; it is an L^2 bound on the omitted part.
    The series is finite when ``m/2`` is a nonnegative integer.
    """
    G = dunkl_transform_radial(f)
    lam = f.params.lambda_k
    jv = normalized_bessel(lam, t * G.s)
    coef = binomial_coefficients(0.5 * m, terms)
    sym = np.zeros_like(jv)
    power = np.ones_like(jv)
    for c in coef:
        sym += c * power
        power = power * jv
    vals = sym * G.samples
    out = inverse_dunkl_transform_radial(SpectralProfile(G.grid, vals, G.params, G.dual_grid, None, f.label))
    support = np.abs(G.samples) > 0
    rho = float(np.abs(jv[support]).max()) if support.any() else 0.0
    half = 0.5 * m
    if half == int(half) and int(half) < terms:
        bound = 0.0
    else:
        tail = np.arange(terms, terms + 200000)
        tail_coef = np.abs(special.binom(half, tail))
        bound = float(np.sum(tail_coef * rho ** tail))
        if rho >= 1.0:
            bound = math.inf
    bound *= weighted_lp_norm(G, 2, strict=False)
    return RadialProfile(out.grid, out.samples, f.params, f.dual_grid, vals, f.band_limit, f.label, True), bound


def convolve(f: RadialProfile, g: RadialProfile) -> RadialProfile:
    """Generalized convolution of radial functions, ``F(f * g) = F f . F g``."""
    if f.grid is not g.grid or f.params != g.params:
        raise InvalidParameterError("convolution needs profiles on the same grid and weight")
    F, Gs = dunkl_transform_radial(f), dunkl_transform_radial(g)
    vals = F.samples * Gs.samples
    out = inverse_dunkl_transform_radial(SpectralProfile(F.grid, vals, F.params, F.dual_grid, None, f.label))
    bl = _min_limit(f.band_limit, g.band_limit)
    return RadialProfile(out.grid, out.samples, f.params, f.dual_grid, vals, bl, f"{f.label}*{g.label}", True)
