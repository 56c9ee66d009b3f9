"""Both sides of the approximation-theoretic and Fourier inequalities, as ratio samples.

Every theorem identifier maps to a pair ``(lhs, rhs)`` with the claimed
inequality ``lhs <~ rhs``; the harness records ``lhs / rhs`` over corpus and
parameter cells.  Two-sided statements are evaluated with a ``side`` (or
recorded as one ratio whose spread is the equivalence bracket).
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .errors import DegeneracyError, InvalidParameterError, ResolutionError
from .measure import (RadialGrid, RadialProfile, SpectralProfile, WeightParams, conjugate_exponent,
                      interval_power_integral, make_panel_grid, measure_weights, weighted_lp_norm)
from .multipliers import smooth_cutoff
from .smoothness import (_spectrum, approximation_errors, difference_norms, laplacian_of_cutoff_norms,
                         moduli, modulus, multiplier_norms, norm, spectral_tail)
from .transform import inverse_many

DEFAULT_J = 10


class TheoremId(str, enum.Enum):
    JACKSON_11 = "JACKSON_11"
    INVERSE_12 = "INVERSE_12"
    SHARP_JACKSON_14 = "SHARP_JACKSON_14"
    SHARP_INVERSE_16 = "SHARP_INVERSE_16"
    REVERSE_MARCHAUD_15 = "REVERSE_MARCHAUD_15"
    SHARP_MARCHAUD_17 = "SHARP_MARCHAUD_17"
    APPROXIMANT_SMOOTH_18 = "APPROXIMANT_SMOOTH_18"
    MODULUS_PITT_T5 = "MODULUS_PITT_T5"
    MODULUS_KELLOGG_T5 = "MODULUS_KELLOGG_T5"
    PITT_1 = "PITT_1"
    PITT_2 = "PITT_2"
    KELLOGG_1 = "KELLOGG_1"
    KELLOGG_2 = "KELLOGG_2"
    HAUSDORFF_YOUNG = "HAUSDORFF_YOUNG"
    HARDY_LITTLEWOOD = "HARDY_LITTLEWOOD"
    BERNSTEIN = "BERNSTEIN"
    LEBESGUE_L1 = "LEBESGUE_L1"
    TITCHMARSH_P2 = "TITCHMARSH_P2"
    K1_SHARPNESS = "K1_SHARPNESS"

    def __str__(self):
        return self.value


REQUIRED = {
    TheoremId.JACKSON_11: {"p", "r", "n"},
    TheoremId.INVERSE_12: {"p", "r", "n"},
    TheoremId.SHARP_JACKSON_14: {"p", "r", "n"},
    TheoremId.SHARP_INVERSE_16: {"p", "r", "n"},
    TheoremId.REVERSE_MARCHAUD_15: {"p", "r", "m", "n"},
    TheoremId.SHARP_MARCHAUD_17: {"p", "r", "m", "n"},
    TheoremId.APPROXIMANT_SMOOTH_18: {"p", "r", "n", "side", "method"},
    TheoremId.MODULUS_PITT_T5: {"p", "q", "r", "delta"},
    TheoremId.MODULUS_KELLOGG_T5: {"p", "r", "delta"},
    TheoremId.PITT_1: {"p", "q"},
    TheoremId.PITT_2: {"p", "q"},
    TheoremId.KELLOGG_1: {"p"},
    TheoremId.KELLOGG_2: {"p"},
    TheoremId.HAUSDORFF_YOUNG: {"p"},
    TheoremId.HARDY_LITTLEWOOD: {"p"},
    TheoremId.BERNSTEIN: {"p", "r"},
    TheoremId.LEBESGUE_L1: {"r", "delta"},
    TheoremId.TITCHMARSH_P2: {"s"},
    TheoremId.K1_SHARPNESS: {"p", "q"},
}

CSV_FIELDS = ("theorem", "corpus_id", "p", "q", "r", "m", "s", "n_or_delta", "lhs", "rhs", "ratio",
              "surrogate", "degenerate", "variant")

# relative size (to ||F f||_2) below which a side counts as zero
ZERO_TOL = 1e-13
# lhs allowed alongside a vanishing rhs before the sample is declared degenerate-with-error
LHS_TOL = 1e-9


@dataclass(frozen=True)
class RatioSample:
    theorem: str
    corpus_id: str
    p: Optional[float]
    q: Optional[float]
    r: Optional[float]
    m: Optional[float]
    s: Optional[float]
    n_or_delta: Optional[float]
    lhs: float
    rhs: float
    ratio: float
    surrogate: bool = False
    degenerate: bool = False
    variant: str = ""

    def key(self) -> tuple:
        def k(x):
            return (0, "") if x is None else (1, x)
        return (self.theorem, self.corpus_id, self.variant, k(self.p), k(self.q), k(self.r), k(self.m),
                k(self.s), k(self.n_or_delta))

    def to_row(self) -> Dict[str, str]:
        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, bool):
                return "true" if x else "false"
            if isinstance(x, float):
                return repr(x)
            return str(x)
        d = asdict(self)
        return {k: fmt(d[k]) for k in CSV_FIELDS}

    @classmethod
    def from_row(cls, row: Dict[str, str]) -> "RatioSample":
        def num(x):
            return None if x == "" else float(x)
        return cls(row["theorem"], row["corpus_id"], num(row["p"]), num(row["q"]), num(row["r"]), num(row["m"]),
                   num(row["s"]), num(row["n_or_delta"]), float(row["lhs"]), float(row["rhs"]), float(row["ratio"]),
                   row["surrogate"] == "true", row["degenerate"] == "true", row.get("variant", ""))


# ---------------------------------------------------------------- spectral pieces

def annulus_window(grid: RadialGrid) -> Tuple[int, int]:
    """Dyadic indices ``j`` whose annuli ``[2^j, 2^(j+1))`` meet the grid.

    The lowest index also absorbs ``[0, 2^j)``.
    """
    j_lo = math.floor(math.log2(grid.nodes[0])) - 1
    j_hi = math.floor(math.log2(grid.R))
    return j_lo, j_hi


def block_norms(values: np.ndarray, grid: RadialGrid, lam: float, q: float,
                window: Optional[Tuple[int, int]] = None) -> List[Tuple[int, float]]:
    """``||v chi_j||_q`` over dyadic annuli ``chi_j = 1_{[2^j, 2^(j+1))}`` for samples ``v`` on ``grid``."""
    j_lo, j_hi = window or annulus_window(grid)
    out = []
    for j in range(j_lo, j_hi + 1):
        a = 0.0 if j == j_lo else 2.0 ** j
        b = 2.0 ** (j + 1)
        if math.isinf(q):
            sel = (grid.nodes >= a) & (grid.nodes < b)
            val = float(np.abs(values[sel]).max()) if sel.any() else 0.0
        else:
            val = float(interval_power_integral(values, grid, lam, a, b, q)) ** (1.0 / q)
        out.append((j, val))
    return out


def dyadic_spectral_norms(f, q: float) -> List[Tuple[int, float]]:
    """``||F(f) chi_j||_q`` for the annuli in the grid's window.

    ``f`` may be a :class:`RadialProfile` or directly a :class:`SpectralProfile`.
    """
    G = f if isinstance(f, SpectralProfile) else _spectrum(f)
    return block_norms(G.samples, G.grid, G.params.lambda_k, q)


def _spec(f) -> SpectralProfile:
    return f if isinstance(f, SpectralProfile) else _spectrum(f)


def pitt_exponent(d_k: float, p: float, q: float) -> float:
    """``d_k (1/p' - 1/q)``."""
    return d_k * (1.0 - 1.0 / p - 1.0 / q)


def weighted_spectral_norm(f, q: float, power: float = 0.0, factor: Optional[np.ndarray] = None) -> float:
    """``|| |s|^power * factor * F f ||_q`` (exact panel quadrature)."""
    G = _spec(f)
    v = np.abs(G.samples) * G.s ** power
    if factor is not None:
        v = v * factor
    if math.isinf(q):
        return float(v.max())
    return float(np.dot(v ** q, measure_weights(G.grid, G.params.lambda_k))) ** (1.0 / q)


def pitt_side(f, p: float, q: float, delta: Optional[float] = None, r: Optional[float] = None) -> float:
    """``|| |x|^{d_k(1/p'-1/q)} [min(1, (delta|x|)^r)] F f ||_q``."""
    G = _spec(f)
    fac = None if delta is None else np.minimum(1.0, (delta * G.s) ** r)
    return weighted_spectral_norm(G, q, pitt_exponent(G.params.d_k, p, q), fac)


def kellogg_side(f, p: float, delta: Optional[float] = None, r: Optional[float] = None) -> float:
    """``(sum_j [min(1, (2^j delta)^{2r})] ||F f chi_j||_{p'}^2)^{1/2}``."""
    pp = conjugate_exponent(p)
    blocks = dyadic_spectral_norms(f, pp)
    total = 0.0
    for j, v in blocks:
        w = 1.0 if delta is None else min(1.0, (2.0 ** j * delta) ** (2 * r))
        total += w * v * v
    return math.sqrt(total)


def hausdorff_young_sides(f: RadialProfile, p: float) -> Tuple[float, float]:
    """``(||F f||_{p'}, ||f||_p)``."""
    pp = conjugate_exponent(p)
    return weighted_spectral_norm(f, pp), norm(f, p)


# ---------------------------------------------------------------- theorem evaluation

def _validate(tid: TheoremId, cell: dict) -> dict:
    need = REQUIRED[tid]
    got = {k for k, v in cell.items() if v is not None}
    if got != need:
        missing, extra = need - got, got - need
        raise InvalidParameterError(f"{tid}: missing {sorted(missing)} / unexpected {sorted(extra)} parameters")
    c = dict(cell)
    for k in ("p", "q", "r", "m", "s", "delta"):
        if k in c:
            c[k] = float(c[k])
            if not c[k] > 0:
                raise InvalidParameterError(f"{tid}: parameter {k} must be positive")
    if "n" in c:
        if float(c["n"]) <= 0:
            raise InvalidParameterError(f"{tid}: n must be positive")
    p = c.get("p")
    if p is not None and tid not in (TheoremId.HAUSDORFF_YOUNG,) and not (1 < p < math.inf):
        raise InvalidParameterError(f"{tid}: needs 1 < p < inf")
    if tid == TheoremId.HAUSDORFF_YOUNG and not (1 <= p <= 2):
        raise InvalidParameterError("HAUSDORFF_YOUNG needs 1 <= p <= 2")
    if tid in (TheoremId.PITT_1, TheoremId.KELLOGG_1, TheoremId.HARDY_LITTLEWOOD) and p > 2:
        raise InvalidParameterError(f"{tid} needs p <= 2")
    if tid in (TheoremId.PITT_2, TheoremId.KELLOGG_2) and p < 2:
        raise InvalidParameterError(f"{tid} needs p >= 2")
    if "q" in c:
        pp = conjugate_exponent(p)
        lo, hi = (p, pp) if p <= 2 else (pp, p)
        if tid == TheoremId.K1_SHARPNESS:
            lo, hi = (2.0, pp) if p <= 2 else (pp, 2.0)
        if tid == TheoremId.PITT_1 or (tid == TheoremId.MODULUS_PITT_T5 and p <= 2):
            lo, hi = p, pp
        if tid == TheoremId.PITT_2 or (tid == TheoremId.MODULUS_PITT_T5 and p > 2):
            lo, hi = pp, p
        if not (lo - 1e-12 <= c["q"] <= hi + 1e-12):
            raise InvalidParameterError(f"{tid}: q={c['q']} outside [{lo}, {hi}]")
    if tid in (TheoremId.REVERSE_MARCHAUD_15, TheoremId.SHARP_MARCHAUD_17) and not c["m"] > c["r"]:
        raise InvalidParameterError(f"{tid}: needs m > r")
    if tid == TheoremId.APPROXIMANT_SMOOTH_18:
        if c["side"] not in ("lower", "upper"):
            raise InvalidParameterError("side must be 'lower' or 'upper'")
        if c["method"] not in ("near-best", "vallee-poussin"):
            raise InvalidParameterError("method must be 'near-best' or 'vallee-poussin'")
    return c


def _sum_power(weights: np.ndarray, values: np.ndarray, e: float) -> float:
    return float(np.sum(weights * values ** e)) ** (1.0 / e)


def evaluate_sides(f: RadialProfile, tid: TheoremId, c: dict, J: int = DEFAULT_J) -> Tuple[float, float, bool, str]:
    """``(lhs, rhs, surrogate, variant)`` for a validated cell."""
    tid = TheoremId(tid)
    p = c.get("p")
    surrogate = False
    variant = ""
    if tid in (TheoremId.JACKSON_11, TheoremId.INVERSE_12, TheoremId.SHARP_JACKSON_14,
               TheoremId.SHARP_INVERSE_16, TheoremId.REVERSE_MARCHAUD_15, TheoremId.SHARP_MARCHAUD_17):
        r = c["r"]
        n = int(c["n"]) if tid != TheoremId.JACKSON_11 else None
        surrogate = p != 2.0 and tid in (TheoremId.JACKSON_11, TheoremId.INVERSE_12,
                                         TheoremId.SHARP_JACKSON_14, TheoremId.SHARP_INVERSE_16)
        s_exp, q_exp = max(p, 2.0), min(p, 2.0)
        if tid == TheoremId.JACKSON_11:
            sigma = float(c["n"])
            lhs = float(approximation_errors(f, [sigma], p)[0])
            rhs = modulus(f, r, 1.0 / sigma, p)
            return lhs, rhs, surrogate, variant
        om_n = modulus(f, r, 1.0 / n, p)
        js = np.arange(1, n + 1, dtype=float)
        fn = norm(f, p)
        if tid == TheoremId.INVERSE_12:
            E = approximation_errors(f, np.arange(0, n + 1), p)
            rhs = n ** (-r) * float(np.sum((np.arange(n + 1) + 1.0) ** (r - 1) * E))
            return om_n, rhs, surrogate, variant
        if tid == TheoremId.SHARP_JACKSON_14:
            E = approximation_errors(f, js, p)
            return n ** (-r) * _sum_power(js ** (s_exp * r - 1), E, s_exp), om_n, surrogate, variant
        if tid == TheoremId.SHARP_INVERSE_16:
            E = approximation_errors(f, js, p)
            return om_n, n ** (-r) * _sum_power(js ** (q_exp * r - 1), E, q_exp) + fn / n ** r, surrogate, variant
        m = c["m"]
        W = moduli(f, m, 1.0 / js, p)
        if tid == TheoremId.REVERSE_MARCHAUD_15:
            return n ** (-r) * _sum_power(js ** (s_exp * r - 1), W, s_exp), om_n + fn / n ** r, surrogate, variant
        return om_n, n ** (-r) * _sum_power(js ** (q_exp * r - 1), W, q_exp) + fn / n ** r, surrogate, variant

    if tid == TheoremId.APPROXIMANT_SMOOTH_18:
        r, n = c["r"], int(c["n"])
        s_exp, q_exp = max(p, 2.0), min(p, 2.0)
        js = np.arange(n + 1, n + J + 1, dtype=float)
        L = laplacian_of_cutoff_norms(f, 2.0 ** js, r, p, c["method"])
        om = modulus(f, r, 2.0 ** (-n), p)
        variant = f"{c['side']}/{c['method']}"
        surrogate = p != 2.0 and c["method"] == "near-best"
        if c["side"] == "lower":
            return _sum_power(2.0 ** (-s_exp * r * js), L, s_exp), om, surrogate, variant
        return om, _sum_power(2.0 ** (-q_exp * r * js), L, q_exp), surrogate, variant

    if tid == TheoremId.MODULUS_PITT_T5:
        r, q, d = c["r"], c["q"], c["delta"]
        side = pitt_side(f, p, q, d, r)
        om = modulus(f, r, d, p)
        return (side, om, False, "") if p <= 2 else (om, side, False, "")

    if tid == TheoremId.MODULUS_KELLOGG_T5:
        r, d = c["r"], c["delta"]
        side = kellogg_side(f, p, d, r)
        om = modulus(f, r, d, p)
        return (side, om, False, "") if p <= 2 else (om, side, False, "")

    if tid == TheoremId.PITT_1:
        return pitt_side(f, p, c["q"]), norm(f, p), False, ""
    if tid == TheoremId.PITT_2:
        return norm(f, p), pitt_side(f, p, c["q"]), False, ""
    if tid == TheoremId.KELLOGG_1:
        return kellogg_side(f, p), norm(f, p), False, ""
    if tid == TheoremId.KELLOGG_2:
        return norm(f, p), kellogg_side(f, p), False, ""
    if tid == TheoremId.HAUSDORFF_YOUNG:
        lhs, rhs = hausdorff_young_sides(f, p)
        return lhs, rhs, False, ""
    if tid == TheoremId.HARDY_LITTLEWOOD:
        return pitt_side(f, p, p), norm(f, p), False, ""

    if tid == TheoremId.BERNSTEIN:
        if f.band_limit is None:
            raise InvalidParameterError("BERNSTEIN needs a band-limited profile")
        r = c["r"]
        lap = float(multiplier_norms(f, f.dual_grid.nodes ** r, p)[0])
        return lap, f.band_limit ** r * norm(f, p), False, ""

    if tid == TheoremId.LEBESGUE_L1:
        r, d = c["r"], c["delta"]
        G = _spec(f)
        lhs = float(np.max(np.minimum(1.0, (d * G.s) ** r) * np.abs(G.samples)))
        return lhs, modulus(f, r, d, 1.0), False, ""

    if tid == TheoremId.TITCHMARSH_P2:
        from .besov import lipschitz_norm, titchmarsh_side
        return lipschitz_norm(f, c["s"], 2.0, J=J), titchmarsh_side(f, c["s"]), False, ""

    if tid == TheoremId.K1_SHARPNESS:
        q = c["q"]
        pit, kel = pitt_side(f, p, q), kellogg_side(f, p)
        return (pit, kel, False, "K-1") if p <= 2 else (kel, pit, False, "K-2")

    raise InvalidParameterError(f"unknown theorem {tid}")  # pragma: no cover


def make_sample(tid, corpus_id: str, c: dict, lhs: float, rhs: float, surrogate: bool, variant: str,
                scale: float) -> RatioSample:
    if lhs < 0 or rhs < 0 or not (math.isfinite(lhs) and math.isfinite(rhs)):
        raise InvalidParameterError(f"{tid}: sides must be finite and nonnegative, got {lhs}, {rhs}")
    degenerate = False
    if rhs <= ZERO_TOL * scale:
        if lhs <= LHS_TOL * scale:
            ratio, degenerate = 0.0, True
        else:
            raise DegeneracyError(f"{tid} on {corpus_id}: rhs={rhs:.3e} vanishes but lhs={lhs:.3e}")
    else:
        ratio = lhs / rhs
    n_or_delta = c.get("n", c.get("delta"))
    return RatioSample(str(tid), corpus_id, c.get("p"), c.get("q"), c.get("r"), c.get("m"), c.get("s"),
                       None if n_or_delta is None else float(n_or_delta), float(lhs), float(rhs), float(ratio),
                       bool(surrogate), degenerate, variant)


def eval_theorem(f: RadialProfile, tid, cell: dict, corpus_id: Optional[str] = None, J: int = DEFAULT_J) -> RatioSample:
    """Evaluate one theorem on one profile and parameter cell."""
    try:
        tid = TheoremId(tid)
    except ValueError as e:
        raise InvalidParameterError(f"unknown theorem id {tid!r}") from e
    c = _validate(tid, cell)
    lhs, rhs, sur, variant = evaluate_sides(f, tid, c, J)
    scale = max(norm(f, 2.0), 1e-300)
    return make_sample(tid, corpus_id or f.label, c, lhs, rhs, sur, variant, scale)


# ---------------------------------------------------------------- extremal family

def _bump(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    m = np.abs(x) < 1
    out[m] = np.exp(-1.0 / (1.0 - x[m] ** 2))
    return out


def window_edges(N: int, eps: float) -> List[Tuple[float, float]]:
    return [(2.0 ** l + eps, 2.0 ** l + 2 * eps) for l in range(1, N + 1)]


def extremal_spectral_grid(N: int, eps: float, nodes: int = 64, gap_panels: int = 48) -> RadialGrid:
    """Panels hugging each spectral window, plus gap panels no wider than ``S / gap_panels``."""
    if eps <= 0 or eps >= 1:
        raise InvalidParameterError("eps must lie in (0, 1)")
    if 2.0 ** (N + 1) * np.finfo(float).eps > 1e-6 * eps:
        raise ResolutionError(f"windows at 2^{N} are not resolved in absolute frequency; use extremal_windows")
    wins = window_edges(N, eps)
    S = wins[-1][1] * 1.0625
    width = S / gap_panels
    edges = [0.0]
    for lo, hi in wins + [(S, S)]:
        gap = lo - edges[-1]
        if gap > 0:
            k = max(1, math.ceil(gap / width))
            edges.extend(edges[-1] + gap * np.arange(1, k + 1) / k)
        if hi > lo:
            edges.append(hi)
    return make_panel_grid(np.array(edges), nodes)


def _extremal_samples(grid: RadialGrid, N: int, eps: float, lam: float, p: float) -> np.ndarray:
    pp = conjugate_exponent(p)
    vals = np.zeros(grid.size)
    for l, (lo, hi) in enumerate(window_edges(N, eps), start=1):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        psi = _bump((grid.nodes - mid) / half)
        nrm = float(interval_power_integral(psi, grid, lam, lo, hi, pp)) ** (1.0 / pp)
        vals += l ** -0.5 * psi / nrm
    return vals


def extremal_spectrum(N: int, eps: float, params: WeightParams, p: float = 1.5, nodes: int = 64) -> SpectralProfile:
    """``F(f_N) = sum_l l^{-1/2} psi_l`` on a window-adapted spectral grid.

    ``psi_l`` is a smooth bump on ``[2^l + eps, 2^l + 2 eps]`` normalized to
    ``||psi_l||_{p'} = 1``.  Works for any ``N`` the floating-point range allows,
    because nothing is transformed back to space.
    """
    if N < 1:
        raise InvalidParameterError("N must be >= 1")
    grid = extremal_spectral_grid(N, eps, nodes)
    vals = _extremal_samples(grid, N, eps, params.lambda_k, p)
    return SpectralProfile(grid, vals, params, None, 2.0 ** N + 2 * eps, f"extremal(N={N},eps={eps})")


def extremal_family(N: int, eps: float, params: WeightParams, p: float = 1.5,
                    spatial_grid: Optional[RadialGrid] = None) -> RadialProfile:
    """``f_N = sum_{l<=N} l^{-1/2} F^{-1}(psi_l)`` as a spatial profile.

    The spectral grid hugs the windows; the spatial grid defaults to the
    default panel layout with radius chosen so that the windows are resolved.
    Raises ``ResolutionError`` when the windows exceed the spatial grid's cap.
    """
    if N < 2:
        raise InvalidParameterError("N must be >= 2")
    from .measure import default_grid
    sg = extremal_spectral_grid(N, eps)
    base = spatial_grid or default_grid()
    if spatial_grid is None:
        # largest radius whose grid still resolves the whole spectral range, and vice versa
        R = min(0.8 * base.size / sg.R, 0.8 * sg.size / sg.R)
        base = base.scaled(R)
    if sg.R > base.spectral_cap * (1 + 1e-9) or base.R > sg.spectral_cap * (1 + 1e-9):
        raise ResolutionError(f"extremal windows up to {sg.R:g} exceed the spectral cap {base.spectral_cap:g}")
    vals = _extremal_samples(sg, N, eps, params.lambda_k, p)
    samples = inverse_many(vals, sg, base, params.lambda_k)[0]
    return RadialProfile(base, samples, params, sg, vals, 2.0 ** N + 2 * eps, f"extremal(N={N},eps={eps})",
                         derived=True)


@dataclass(frozen=True, eq=False)
class WindowedSpectrum:
    """``F(f_N)`` stored window by window in local coordinates ``u = s - 2^l``.

    Window ``l`` covers ``[2^l + eps, 2^l + 2 eps]``; keeping ``u`` separate from
    the offset ``2^l`` keeps the windows resolved for any ``N``, where absolute
    frequencies would lose the window in floating point.
    """

    params: WeightParams
    eps: float
    p: float
    levels: np.ndarray
    u: np.ndarray
    u_weights: np.ndarray
    shape: np.ndarray
    coeffs: np.ndarray

    def _log_s(self, l: int) -> np.ndarray:
        return l * math.log(2.0) + np.log1p(self.u * 2.0 ** (-l))

    def window_norm(self, i: int, q: float, power: float = 0.0) -> float:
        """``|| |s|^power F(f_N) ||_q`` restricted to window ``i``."""
        l = int(self.levels[i])
        lam = self.params.lambda_k
        logs = self._log_s(l)
        logc = math.log(self.params.constant)
        logterm = q * (np.log(self.shape) + math.log(self.coeffs[i]) + power * logs) + (2 * lam + 1) * logs + logc
        top = logterm.max()
        return math.exp((top + math.log(float(np.dot(self.u_weights, np.exp(logterm - top))))) / q)

    def annulus_norms(self, q: float) -> List[Tuple[int, float]]:
        """``||F(f_N) chi_l||_q``; window ``l`` lies inside annulus ``l``."""
        return [(int(l), self.window_norm(i, q)) for i, l in enumerate(self.levels)]

    def kellogg(self, p: float) -> float:
        pp = conjugate_exponent(p)
        return math.sqrt(sum(v * v for _, v in self.annulus_norms(pp)))

    def pitt(self, p: float, q: float) -> float:
        a = pitt_exponent(self.params.d_k, p, q)
        return sum(self.window_norm(i, q, a) ** q for i in range(len(self.levels))) ** (1.0 / q)


def extremal_windows(N: int, eps: float, params: WeightParams, p: float = 1.5, nodes: int = 64) -> WindowedSpectrum:
    """Window-local representation of ``F(f_N)``, valid for any ``N >= 1``."""
    if N < 1:
        raise InvalidParameterError("N must be >= 1")
    if not 0 < eps < 1:
        raise InvalidParameterError("eps must lie in (0, 1)")
    x, w = np.polynomial.legendre.leggauss(nodes)
    u = eps * (1.5 + 0.5 * x)
    uw = 0.5 * eps * w
    shape = _bump(x)
    shape = np.where(shape > 0, shape, 1e-300)
    levels = np.arange(1, N + 1)
    pp = conjugate_exponent(p)
    ws = WindowedSpectrum(params, eps, p, levels, u, uw, shape, np.ones(N))
    coeffs = np.array([l ** -0.5 / ws.window_norm(i, pp) for i, l in enumerate(levels)])
    return WindowedSpectrum(params, eps, p, levels, u, uw, shape, coeffs)


def extremal_study(Ns: Iterable[int], eps: float, params: WeightParams, p: float = 1.5,
                   qs: Iterable[float] = ()) -> List[dict]:
    """Kellogg sum of ``f_N`` against ``(sum_{l<=N} 1/l)^{1/2}``, and Pitt/Kellogg ratios for each ``q``."""
    rows = []
    qs = list(qs)
    for N in Ns:
        W = extremal_windows(N, eps, params, p)
        kel = W.kellogg(p)
        harmonic = math.sqrt(sum(1.0 / l for l in range(1, N + 1)))
        row = {"N": N, "kellogg": kel, "harmonic": harmonic, "growth_ratio": kel / harmonic}
        for q in qs:
            row[f"pitt_q={q}"] = W.pitt(p, q)
            row[f"pitt_over_kellogg_q={q}"] = row[f"pitt_q={q}"] / kel
        rows.append(row)
    return rows
