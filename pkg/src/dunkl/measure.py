"""Weighted radial grids, profiles and the normalized measure ``dmu_k``.

On radial data the normalized Dunkl measure reduces to

    int f dmu_k = c_lam * int_0^inf f0(r) r^(2 lam + 1) dr,   c_lam = 1 / (2^lam Gamma(lam + 1)),

so that the Gaussian ``exp(-r^2/2)`` has unit mass.  The same formula with
``lam = k - 1/2`` gives half of the rank-one measure ``|x|^(2k) dx`` over the
real line, which is why rank-one even/odd parts can reuse the radial machinery.
"""
from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import InvalidParameterError, TruncationError
from .specfun import log_normalization

TAIL_TOLERANCE = 1e-14
# fraction of the grid, measured from R inward, inspected by the tail check
TAIL_ZONE = 0.02
DEFAULT_GRID = (40.0, 64, 64)
# dyadic refinements below the nominal panel width near the origin
ORIGIN_REFINEMENTS = 10


@dataclass(frozen=True)
class WeightParams:
    """Weighted setting: ``lambda_k``, generalized dimension ``d_k`` and an optional rank-one ``k``."""

    lambda_k: float
    d_k: float = field(default=None)  # type: ignore[assignment]
    rank1_k: Optional[float] = None

    def __post_init__(self):
        lam = float(self.lambda_k)
        if not math.isfinite(lam):
            raise InvalidParameterError("lambda_k must be finite")
        if self.rank1_k is not None:
            k = float(self.rank1_k)
            if k < 0 or abs(lam - (k - 0.5)) > 1e-12:
                raise InvalidParameterError(f"rank-one k={k} requires lambda_k = k - 1/2, got {lam}")
            # k = 0 is the classical Fourier case, lambda = -1/2
            if k == 0.0:
                lam = -0.5
        if lam <= -0.5 and not (self.rank1_k is not None and lam == -0.5):
            raise InvalidParameterError(f"lambda_k must exceed -1/2, got {lam}")
        object.__setattr__(self, "lambda_k", lam)
        d = 2.0 * (lam + 1.0)
        if self.d_k is not None and abs(float(self.d_k) - d) > 1e-12:
            raise InvalidParameterError(f"d_k must equal 2(lambda_k+1) = {d}, got {self.d_k}")
        object.__setattr__(self, "d_k", d)

    @classmethod
    def rank1(cls, k: float) -> "WeightParams":
        return cls(lambda_k=float(k) - 0.5, rank1_k=float(k))

    @property
    def constant(self) -> float:
        """``c_lam = 1/(2^lam Gamma(lam+1))``."""
        return math.exp(-log_normalization(self.lambda_k))

    def to_dict(self) -> dict:
        return {"lambda_k": self.lambda_k, "d_k": self.d_k, "rank1_k": self.rank1_k}

    @classmethod
    def from_dict(cls, d: dict) -> "WeightParams":
        return cls(lambda_k=d["lambda_k"], rank1_k=d.get("rank1_k"))


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Composite Gauss-Legendre grid on ``[0, R]``.

    ``unit_breaks`` are the panel boundaries divided by ``R``; grids that are
    dilations of each other share them, which lets the transform layer reuse
    kernel matrices.
    """

    R: float
    nodes_per_panel: int
    unit_breaks: tuple
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def panels(self) -> int:
        return len(self.unit_breaks) - 1

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def breaks(self) -> np.ndarray:
        return self.R * np.asarray(self.unit_breaks)

    @property
    def shape_key(self) -> tuple:
        return (self.nodes_per_panel, self.unit_breaks)

    @property
    def spectral_cap(self) -> float:
        """Largest dual-variable value this grid resolves, ``0.8 * N / R``."""
        return 0.8 * self.size / self.R

    def scaled(self, R: float) -> "RadialGrid":
        """The same panel layout dilated to radius ``R``."""
        return _grid_from_unit(self.unit_breaks, float(R), self.nodes_per_panel)

    def refined(self) -> "RadialGrid":
        """Same panels with twice the nodes per panel."""
        return _grid_from_unit(self.unit_breaks, self.R, 2 * self.nodes_per_panel)

    def to_dict(self) -> dict:
        return {
            "R": self.R,
            "panels": self.panels,
            "nodes_per_panel": self.nodes_per_panel,
            "unit_breaks": list(self.unit_breaks),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RadialGrid":
        return _grid_from_unit(tuple(float(b) for b in d["unit_breaks"]), float(d["R"]), int(d["nodes_per_panel"]))


@functools.lru_cache(maxsize=64)
def _gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


@functools.lru_cache(maxsize=64)
def _grid_from_unit(unit_breaks: tuple, R: float, nodes_per_panel: int) -> RadialGrid:
    x, w = _gauss_legendre(nodes_per_panel)
    b = R * np.asarray(unit_breaks)
    lo, hi = b[:-1, None], b[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + half * (x[None, :] + 1.0)).ravel()
    weights = (half * w[None, :]).ravel()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return RadialGrid(R, nodes_per_panel, unit_breaks, nodes, weights)


def _panel_layout(R: float, panels: int) -> list:
    """Breakpoints: powers of two refining toward 0, then greedy subdivision."""
    if panels == 1:
        return [0.0, R]
    j_hi = math.ceil(math.log2(R)) - 1
    j_lo = math.floor(math.log2(R / panels)) - ORIGIN_REFINEMENTS
    mandatory = [2.0**j for j in range(j_lo, j_hi + 1) if 2.0**j < R]
    # keep the largest ones if there are too many for the panel budget
    mandatory = mandatory[max(0, len(mandatory) - (panels - 1)):]
    edges = [0.0] + mandatory + [R]
    segs = [[edges[i], edges[i + 1], 1] for i in range(len(edges) - 1)]
    for _ in range(panels - len(segs)):
        widest = max(segs, key=lambda s: (s[1] - s[0]) / s[2])
        widest[2] += 1
    out = [0.0]
    for a, b, n in segs:
        out.extend(a + (b - a) * np.arange(1, n + 1) / n)
    out[-1] = R
    return out


def make_grid(R: float, panels: int, nodes_per_panel: int) -> RadialGrid:
    """Composite Gauss-Legendre grid on ``[0, R]``.

    Panel edges include every power of two below ``R`` down to ten octaves under
    the nominal panel width ``R/panels``; the remaining panels subdivide the
    widest segments.  Dyadic edges make integrals over dyadic annuli exact
    panel sums.
    """
    if not (math.isfinite(R) and R > 0):
        raise InvalidParameterError(f"R must be positive, got {R}")
    if int(panels) != panels or panels < 1:
        raise InvalidParameterError(f"panels must be a positive integer, got {panels}")
    if int(nodes_per_panel) != nodes_per_panel or nodes_per_panel < 2:
        raise InvalidParameterError(f"nodes_per_panel must be >= 2, got {nodes_per_panel}")
    edges = np.asarray(_panel_layout(float(R), int(panels)))
    unit = tuple(float(e) for e in edges / R)
    return _grid_from_unit(unit, float(R), int(nodes_per_panel))


def make_panel_grid(breaks, nodes_per_panel: int) -> RadialGrid:
    """Grid with caller-chosen panel edges (must start at 0 and increase)."""
    b = np.asarray(breaks, dtype=float)
    if b.ndim != 1 or b.size < 2 or b[0] != 0.0 or np.any(np.diff(b) <= 0):
        raise InvalidParameterError("breaks must start at 0 and be strictly increasing")
    if nodes_per_panel < 2:
        raise InvalidParameterError("nodes_per_panel must be >= 2")
    R = float(b[-1])
    return _grid_from_unit(tuple(float(x) for x in b / R), R, int(nodes_per_panel))


def default_grid() -> RadialGrid:
    return make_grid(*DEFAULT_GRID)


@functools.lru_cache(maxsize=128)
def measure_weights(grid: RadialGrid, lam: float) -> np.ndarray:
    """Quadrature weights of ``dmu`` on ``grid``: ``c_lam * w_i * r_i^(2 lam + 1)``."""
    logc = -log_normalization(lam)
    w = grid.weights * np.exp(logc + (2.0 * lam + 1.0) * np.log(grid.nodes))
    w.setflags(write=False)
    return w


class _Profile:
    """Shared behaviour of spatial and spectral profiles."""

    grid: RadialGrid
    samples: np.ndarray
    params: WeightParams
    derived: bool

    def _check(self):
        s = np.asarray(self.samples)
        if s.dtype.kind not in "fc":
            s = s.astype(float)
        if s.shape != (self.grid.size,):
            raise InvalidParameterError(f"expected {self.grid.size} samples, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise InvalidParameterError("samples must be finite")
        s = s.copy()
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    @functools.cached_property
    def tail_magnitude(self) -> float:
        """Largest ``|f|`` in the outer zone of the grid, relative to ``max |f|``."""
        a = np.abs(self.samples)
        top = a.max() if a.size else 0.0
        if top == 0.0:
            return 0.0
        zone = self.grid.nodes >= (1.0 - TAIL_ZONE) * self.grid.R
        if not zone.any():
            zone[-1] = True
        return float(a[zone].max() / top)

    @property
    def tail_ok(self) -> bool:
        return self.tail_magnitude < TAIL_TOLERANCE

    def require_tail(self, what: str, strict: Optional[bool] = None):
        """Raise ``TruncationError`` if the profile has not decayed at ``R``.

        ``strict=None`` checks only profiles built directly from samples;
        multiplier outputs carry an exact spectrum and are allowed to be
        truncated (their norms then miss the part beyond ``R``).
        """
        if strict is None:
            strict = not self.derived
        if strict and not self.tail_ok:
            raise TruncationError(f"{what}: profile '{getattr(self, 'label', '')}' not decayed at R={self.grid.R}",
                                  self.tail_magnitude)

    @property
    def is_real(self) -> bool:
        return np.isrealobj(self.samples)


@dataclass(frozen=True, eq=False)
class RadialProfile(_Profile):
    """A radial function sampled on ``grid``.

    ``dual_grid`` is the frequency grid the transform maps onto (the same grid
    by default).  ``spectrum`` holds exact transform samples on ``dual_grid``
    when they are known, e.g. for outputs of spectral multipliers.
    """

    grid: RadialGrid
    samples: np.ndarray
    params: WeightParams
    dual_grid: Optional[RadialGrid] = None
    spectrum: Optional[np.ndarray] = field(default=None, repr=False)
    band_limit: Optional[float] = None
    label: str = ""
    derived: bool = False

    def __post_init__(self):
        self._check()
        if self.dual_grid is None:
            object.__setattr__(self, "dual_grid", self.grid)
        if self.spectrum is not None:
            sp = np.array(self.spectrum)
            if sp.shape != (self.dual_grid.size,):
                raise InvalidParameterError("spectrum does not match dual grid")
            sp.setflags(write=False)
            object.__setattr__(self, "spectrum", sp)

    @classmethod
    def from_function(cls, func, params: WeightParams, grid: Optional[RadialGrid] = None, label: str = "",
                      dual_grid: Optional[RadialGrid] = None) -> "RadialProfile":
        grid = grid or default_grid()
        return cls(grid, np.asarray(func(grid.nodes)), params, dual_grid=dual_grid, label=label)

    def with_samples(self, samples, spectrum=None, label=None, band_limit=None, derived=True) -> "RadialProfile":
        return RadialProfile(self.grid, samples, self.params, self.dual_grid, spectrum, band_limit,
                             self.label if label is None else label, derived)

    def _combine(self, other, op, label):
        if isinstance(other, RadialProfile):
            if other.grid is not self.grid or other.params != self.params:
                raise InvalidParameterError("profiles live on different grids or weights")
            spec = None
            if self.spectrum is not None and other.spectrum is not None and other.dual_grid is self.dual_grid:
                spec = op(self.spectrum, other.spectrum)
            bl = None
            if self.band_limit is not None and other.band_limit is not None:
                bl = max(self.band_limit, other.band_limit)
            return RadialProfile(self.grid, op(self.samples, other.samples), self.params, self.dual_grid,
                                 spec, bl, label, self.derived or other.derived)
        return NotImplemented

    def __add__(self, other):
        return self._combine(other, np.add, f"({self.label}+{getattr(other, 'label', '')})")

    def __sub__(self, other):
        return self._combine(other, np.subtract, f"({self.label}-{getattr(other, 'label', '')})")

    def __mul__(self, c):
        if isinstance(c, RadialProfile):
            # pointwise product; the spectrum is not a simple product
            if c.grid is not self.grid:
                raise InvalidParameterError("profiles live on different grids")
            return RadialProfile(self.grid, self.samples * c.samples, self.params, self.dual_grid,
                                 None, None, f"{self.label}*{c.label}", self.derived or c.derived)
        if not np.isscalar(c):
            return NotImplemented
        spec = None if self.spectrum is None else c * self.spectrum
        return RadialProfile(self.grid, c * self.samples, self.params, self.dual_grid, spec,
                             self.band_limit, self.label, self.derived)

    __rmul__ = __mul__

    def __neg__(self):
        return -1.0 * self

    def conj(self) -> "RadialProfile":
        return self.with_samples(np.conj(self.samples), derived=self.derived)


@dataclass(frozen=True, eq=False)
class SpectralProfile(_Profile):
    """A function of the frequency variable ``s`` on ``grid``.

    ``dual_grid`` is the spatial grid that the inverse transform maps onto.
    ``band_limit`` is set when the samples vanish beyond it.
    """

    grid: RadialGrid
    samples: np.ndarray
    params: WeightParams
    dual_grid: Optional[RadialGrid] = None
    band_limit: Optional[float] = None
    label: str = ""
    derived: bool = True

    def __post_init__(self):
        self._check()
        if self.dual_grid is None:
            object.__setattr__(self, "dual_grid", self.grid)
        if self.band_limit is not None:
            sig = float(self.band_limit)
            if not sig > 0:
                raise InvalidParameterError("band_limit must be positive")
            a = np.abs(self.samples)
            top = a.max() if a.size else 0.0
            outside = a[self.grid.nodes > sig * (1 + 1e-12)]
            if top > 0 and outside.size and outside.max() >= 1e-13 * top:
                raise InvalidParameterError(f"samples do not vanish beyond band limit {sig}")

    @property
    def s(self) -> np.ndarray:
        return self.grid.nodes

    def with_samples(self, samples, band_limit=None, label=None) -> "SpectralProfile":
        return SpectralProfile(self.grid, samples, self.params, self.dual_grid, band_limit,
                               self.label if label is None else label)


def weighted_integral(f: _Profile, strict: Optional[bool] = None):
    """``int f dmu_k`` by composite quadrature."""
    f.require_tail("weighted_integral", strict)
    w = measure_weights(f.grid, f.params.lambda_k)
    val = np.dot(w, f.samples)
    return complex(val) if np.iscomplexobj(val) else float(val)


def _check_p(p: float) -> float:
    p = float(p)
    if math.isnan(p) or p < 1:
        raise InvalidParameterError(f"p must lie in [1, inf], got {p}")
    return p


def lp_norm_of_samples(samples: np.ndarray, mw: np.ndarray, p: float) -> np.ndarray:
    """Weighted ``L^p`` norm along the last axis; ``mw`` are measure weights."""
    a = np.abs(samples)
    if math.isinf(p):
        return a.max(axis=-1)
    if p == 2.0:
        return np.sqrt(np.einsum("...i,...i,i->...", a, a, mw))
    if p == 1.0:
        return a @ mw
    top = a.max(axis=-1, keepdims=True)
    top = np.where(top > 0, top, 1.0)
    return top[..., 0] * ((a / top) ** p @ mw) ** (1.0 / p)


def weighted_lp_norm(f: _Profile, p: float, strict: Optional[bool] = None) -> float:
    """``(int |f|^p dmu_k)^(1/p)``; ``p = inf`` is the grid supremum (diagnostic only)."""
    p = _check_p(p)
    if not math.isinf(p):
        f.require_tail("weighted_lp_norm", strict)
    return float(lp_norm_of_samples(f.samples, measure_weights(f.grid, f.params.lambda_k), p))


def conjugate_exponent(p: float) -> float:
    p = _check_p(p)
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def save_profile(f: _Profile, path) -> tuple:
    """Write ``path`` (CSV ``r,re,im``) and a JSON sidecar next to it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    z = np.asarray(f.samples, dtype=complex)
    with open(path, "w") as fh:
        fh.write("r,re,im\n")
        for r, v in zip(f.grid.nodes, z):
            fh.write(f"{float(r)!r},{float(v.real)!r},{float(v.imag)!r}\n")
    side = {
        "domain": "spectral" if isinstance(f, SpectralProfile) else "spatial",
        "params": f.params.to_dict(),
        "grid": f.grid.to_dict(),
        "dual_grid": f.dual_grid.to_dict() if f.dual_grid is not f.grid else None,
        "band_limit": f.band_limit,
        "label": f.label,
        "complex": bool(np.iscomplexobj(f.samples)),
        "derived": bool(f.derived),
    }
    sidecar = path.with_suffix(".json")
    sidecar.write_text(json.dumps(side, indent=2))
    return path, sidecar


def load_profile(path) -> _Profile:
    path = Path(path)
    meta = json.loads(path.with_suffix(".json").read_text())
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    grid = RadialGrid.from_dict(meta["grid"])
    if data.shape[0] != grid.size or not np.allclose(data[:, 0], grid.nodes, rtol=1e-14, atol=0):
        raise InvalidParameterError("CSV nodes do not match the sidecar grid")
    samples = data[:, 1] + 1j * data[:, 2] if meta.get("complex") else data[:, 1]
    params = WeightParams.from_dict(meta["params"])
    dual = RadialGrid.from_dict(meta["dual_grid"]) if meta.get("dual_grid") else None
    if meta["domain"] == "spectral":
        return SpectralProfile(grid, samples, params, dual, meta.get("band_limit"), meta.get("label", ""))
    return RadialProfile(grid, samples, params, dual, band_limit=meta.get("band_limit"), label=meta.get("label", ""),
                         derived=bool(meta.get("derived", False)))


@functools.lru_cache(maxsize=64)
def _barycentric_weights(n: int) -> np.ndarray:
    x, _ = _gauss_legendre(n)
    w = np.array([1.0 / np.prod(x[i] - np.delete(x, i)) for i in range(n)])
    return w / np.abs(w).max()


def _panel_interpolate(x_nodes: np.ndarray, values: np.ndarray, x_new: np.ndarray) -> np.ndarray:
    """Barycentric Lagrange interpolation on one panel's Gauss nodes (last axis of ``values``)."""
    w = _barycentric_weights(x_nodes.size)
    d = x_new[:, None] - x_nodes[None, :]
    exact = d == 0
    d[exact] = 1.0
    c = w / d
    out = (values @ c.T) / c.sum(axis=1)
    hit = exact.any(axis=1)
    if hit.any():
        out[..., hit] = values[..., np.argmax(exact[hit], axis=1)]
    return out


def interpolate_samples(values: np.ndarray, grid: RadialGrid, r: np.ndarray) -> np.ndarray:
    """Panelwise polynomial interpolation of grid samples at radii ``r``; 0 beyond ``grid.R``."""
    r = np.asarray(r, dtype=float)
    flat = r.ravel()
    out = np.zeros(flat.shape, dtype=np.result_type(values, float))
    n = grid.nodes_per_panel
    panel = np.searchsorted(grid.breaks, flat, side="right") - 1
    panel = np.where(flat == grid.R, grid.panels - 1, panel)
    for i in np.unique(panel[(panel >= 0) & (panel < grid.panels)]):
        sel = panel == i
        out[sel] = _panel_interpolate(grid.nodes[i * n:(i + 1) * n], values[i * n:(i + 1) * n], flat[sel])
    return out.reshape(r.shape)


def interval_power_integral(values: np.ndarray, grid: RadialGrid, lam: float, a: float, b: float,
                            power: float) -> np.ndarray:
    """``c_lam * int_a^b |v(x)|^power x^(2 lam + 1) dx`` for samples ``v`` on ``grid``.

    Whole panels use the grid's own nodes; panels cut by ``a`` or ``b`` are
    re-sampled by polynomial interpolation on that panel.  ``values`` may be
    2-D with one function per row.
    """
    v = np.atleast_2d(values)
    a = max(0.0, float(a))
    b = min(grid.R, float(b))
    out = np.zeros(v.shape[0])
    if b <= a:
        return out if np.ndim(values) > 1 else out[0]
    n = grid.nodes_per_panel
    edges = grid.breaks
    mw = measure_weights(grid, lam)
    inside = np.zeros(grid.size, dtype=bool)
    gx, gw = _gauss_legendre(n)
    logc = -log_normalization(lam)
    for i in range(grid.panels):
        lo, hi = edges[i], edges[i + 1]
        if hi <= a or lo >= b:
            continue
        if lo >= a and hi <= b:
            inside[i * n:(i + 1) * n] = True
            continue
        u, w = max(lo, a), min(hi, b)
        xs = u + 0.5 * (w - u) * (gx + 1.0)
        with np.errstate(divide="ignore"):
            ws = 0.5 * (w - u) * gw * np.exp(logc + (2.0 * lam + 1.0) * np.log(xs))
        vals = _panel_interpolate(grid.nodes[i * n:(i + 1) * n], v[:, i * n:(i + 1) * n], xs)
        out += np.abs(vals) ** power @ ws
    out += np.abs(v[:, inside]) ** power @ mw[inside]
    return out if np.ndim(values) > 1 else out[0]
