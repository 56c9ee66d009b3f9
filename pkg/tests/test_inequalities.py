import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special

from conftest import LAMBDAS, gaussian
from dunkl.errors import DegeneracyError, InvalidParameterError, ResolutionError
from dunkl.harness import bandlimited_bump
from dunkl.inequalities import (CSV_FIELDS, REQUIRED, RatioSample, TheoremId, dyadic_spectral_norms, eval_theorem,
                                extremal_family, extremal_spectral_grid, extremal_spectrum, extremal_study,
                                extremal_windows, kellogg_side, make_sample, pitt_exponent, pitt_side)
from dunkl.measure import WeightParams, default_grid, measure_weights
from dunkl.smoothness import norm, t_grid


@pytest.fixture(scope="module")
def bump1():
    return bandlimited_bump(WeightParams(0.7), 1.0, default_grid(), "bump1")


@pytest.fixture(scope="module")
def bump2():
    return bandlimited_bump(WeightParams(0.7), 2.0, default_grid(), "bump2")


@pytest.mark.parametrize("lam", LAMBDAS)
@pytest.mark.parametrize("q", [1.5, 2.0, 3.0])
def test_dyadic_additivity(lam, q, grid):
    f = gaussian(lam, 0.5, grid)
    total = sum(v ** q for _, v in dyadic_spectral_norms(f, q))
    whole = float(np.dot(np.exp(-q * f.dual_grid.nodes ** 2 / 2), measure_weights(f.dual_grid, lam)))
    assert total == pytest.approx(whole, rel=1e-10)


@pytest.mark.parametrize("lam", [0.2, 3.0])
def test_annulus_oracle(lam, grid):
    f = gaussian(lam, 0.5, grid)
    blocks = dyadic_spectral_norms(f, 2.0)
    for j, v in blocks:
        hi = 4.0 ** (j + 1)
        lo = 0.0 if j == blocks[0][0] else 4.0 ** j
        if hi < lam + 1:
            mass = special.gammainc(lam + 1, hi) - special.gammainc(lam + 1, lo)
        else:
            mass = special.gammaincc(lam + 1, lo) - special.gammaincc(lam + 1, hi)
        # absolute floor: transform roundoff
        assert v == pytest.approx(math.sqrt(2.0 ** (-lam - 1) * mass), rel=1e-9, abs=1e-14)


def test_bandlimited_annuli_vanish(bump1):
    blocks = dict(dyadic_spectral_norms(bump1, 2.0))
    assert all(v == 0.0 for j, v in blocks.items() if j >= 0)
    assert blocks[-1] == pytest.approx(norm(bump1, 2.0), rel=1e-12)


def test_extremal_two_annuli():
    G = extremal_spectrum(2, 0.1, WeightParams(0.7), p=1.5)
    blocks = dict(dyadic_spectral_norms(G, 3.0))
    assert {j for j, v in blocks.items() if v > 0} == {1, 2}
    assert blocks[1] == pytest.approx(1.0, rel=1e-10)
    assert blocks[2] == pytest.approx(2 ** -0.5, rel=1e-10)


@pytest.mark.parametrize("lam", [0.2, 1.5])
def test_windowed_matches_grid_spectrum(lam):
    params = WeightParams(lam)
    G = extremal_spectrum(8, 0.1, params, p=1.5)
    W = extremal_windows(8, 0.1, params, p=1.5)
    assert W.kellogg(1.5) == pytest.approx(kellogg_side(G, 1.5), rel=1e-8)
    for q in (2.0, 2.5, 3.0):
        assert W.pitt(1.5, q) == pytest.approx(pitt_side(G, 1.5, q), rel=1e-8)


def test_extremal_growth():
    rows = extremal_study([4, 8, 16, 32, 64], 0.1, WeightParams(0.7), 1.5, qs=[2.0, 3.0])
    for row in rows:
        assert row["growth_ratio"] == pytest.approx(1.0, abs=1e-10)
    for q in (2.0, 3.0):
        r = [row[f"pitt_over_kellogg_q={q}"] for row in rows]
        assert all(a > b for a, b in zip(r, r[1:]))


def test_extremal_family_spatial():
    f = extremal_family(6, 0.1, WeightParams(0.7))
    blocks = dict(dyadic_spectral_norms(f, 3.0))
    for l in range(1, 7):
        assert blocks[l] == pytest.approx(l ** -0.5, rel=1e-10)
    assert f.derived and f.band_limit == pytest.approx(64.2)


def test_extremal_errors():
    with pytest.raises(ResolutionError):
        extremal_spectral_grid(60, 0.1)
    with pytest.raises(InvalidParameterError):
        extremal_spectral_grid(4, 1.5)
    with pytest.raises(InvalidParameterError):
        extremal_windows(0, 0.1, WeightParams(0.7))
    with pytest.raises(InvalidParameterError):
        extremal_family(1, 0.1, WeightParams(0.7))


@pytest.mark.parametrize("lam", LAMBDAS)
@pytest.mark.parametrize("p", [1.0, 1.25, 1.5, 2.0])
def test_hausdorff_young(lam, p, grid):
    s = eval_theorem(gaussian(lam, 0.5, grid), "HAUSDORFF_YOUNG", {"p": p})
    assert s.ratio <= 1 + 1e-6
    if p in (1.0, 2.0):
        assert s.ratio == pytest.approx(1.0, abs=1e-9)


def test_constant_one_identities(gauss07):
    assert eval_theorem(gauss07, "KELLOGG_1", {"p": 2.0}).ratio == pytest.approx(1.0, abs=1e-10)
    assert eval_theorem(gauss07, "PITT_1", {"p": 2.0, "q": 2.0}).ratio == pytest.approx(1.0, abs=1e-10)
    assert pitt_exponent(3.4, 2.0, 2.0) == 0.0


def test_jackson_on_bandlimited(bump2):
    s = eval_theorem(bump2, "JACKSON_11", {"p": 2.0, "r": 1.0, "n": 4})
    assert s.lhs == 0.0 and s.ratio == 0.0 and not s.degenerate
    b = eval_theorem(bump2, "BERNSTEIN", {"p": 2.0, "r": 1.0})
    assert 0 < b.ratio <= 1.0


def test_bernstein_needs_band_limit(gauss07):
    with pytest.raises(InvalidParameterError):
        eval_theorem(gauss07, "BERNSTEIN", {"p": 2.0, "r": 1.0})


def test_sharp_jackson_oracle():
    lam, r, n = 0.7, 1.0, 16
    f = gaussian(lam, 0.5)
    c = 1.0 / (2 ** lam * special.gamma(lam + 1))
    E = [math.sqrt(2.0 ** (-lam - 1) * special.gammaincc(lam + 1, j * j)) for j in range(1, n + 1)]
    lhs = n ** -r * math.sqrt(sum(j ** (2 * r - 1) * e * e for j, e in zip(range(1, n + 1), E)))

    def diff_norm(t):
        def g(s):
            z = t * s
            jl = 2 ** lam * special.gamma(lam + 1) * z ** (-lam) * special.jv(lam, z) if z > 0 else 1.0
            return (1 - jl) ** r * math.exp(-s * s) * s ** (2 * lam + 1)
        return math.sqrt(c * integrate.quad(g, 0, 12, limit=400, epsabs=1e-300, epsrel=1e-11)[0])
    rhs = max(diff_norm(t) for t in t_grid(1.0 / n))
    s = eval_theorem(f, "SHARP_JACKSON_14", {"p": 2.0, "r": r, "n": n})
    assert s.lhs == pytest.approx(lhs, rel=1e-6)
    assert s.rhs == pytest.approx(rhs, rel=1e-6)
    assert not s.surrogate
    assert eval_theorem(f, "SHARP_JACKSON_14", {"p": 1.5, "r": r, "n": n}).surrogate


def test_variants(gauss07):
    cell = {"p": 1.5, "r": 1.0, "n": 4, "side": "lower", "method": "near-best"}
    assert eval_theorem(gauss07, "APPROXIMANT_SMOOTH_18", cell).variant == "lower/near-best"
    assert eval_theorem(gauss07, "K1_SHARPNESS", {"p": 1.5, "q": 2.5}).variant == "K-1"
    assert eval_theorem(gauss07, "K1_SHARPNESS", {"p": 3.0, "q": 2.0}).variant == "K-2"


@pytest.mark.parametrize("tid, cell", [
    ("JACKSON_11", {"p": 2.0, "r": 1.0}),
    ("JACKSON_11", {"p": 2.0, "r": 1.0, "n": 4, "q": 2.0}),
    ("JACKSON_11", {"p": 1.0, "r": 1.0, "n": 4}),
    ("JACKSON_11", {"p": 2.0, "r": -1.0, "n": 4}),
    ("JACKSON_11", {"p": 2.0, "r": 1.0, "n": 0}),
    ("PITT_1", {"p": 1.5, "q": 1.2}),
    ("PITT_1", {"p": 3.0, "q": 3.0}),
    ("PITT_2", {"p": 1.5, "q": 2.0}),
    ("HAUSDORFF_YOUNG", {"p": 3.0}),
    ("KELLOGG_2", {"p": 1.5}),
    ("REVERSE_MARCHAUD_15", {"p": 2.0, "r": 2.0, "m": 1.0, "n": 4}),
    ("APPROXIMANT_SMOOTH_18", {"p": 2.0, "r": 1.0, "n": 4, "side": "middle", "method": "near-best"}),
    ("APPROXIMANT_SMOOTH_18", {"p": 2.0, "r": 1.0, "n": 4, "side": "lower", "method": "box"}),
    ("K1_SHARPNESS", {"p": 1.5, "q": 1.8}),
    ("NOT_A_THEOREM", {"p": 2.0}),
])
def test_invalid_cells(gauss07, tid, cell):
    with pytest.raises(InvalidParameterError):
        eval_theorem(gauss07, tid, cell)


def test_required_covers_all_ids():
    assert set(REQUIRED) == set(TheoremId)


def test_degeneracy_rules():
    c = {"p": 2.0}
    s = make_sample("HAUSDORFF_YOUNG", "x", c, 0.0, 0.0, False, "", 1.0)
    assert s.degenerate and s.ratio == 0.0
    with pytest.raises(DegeneracyError):
        make_sample("HAUSDORFF_YOUNG", "x", c, 1.0, 0.0, False, "", 1.0)
    with pytest.raises(InvalidParameterError):
        make_sample("HAUSDORFF_YOUNG", "x", c, math.nan, 1.0, False, "", 1.0)
    assert make_sample("OMEGA_REALIZATION", "x", c, 1.0, 2.0, False, "", 1.0).theorem == "OMEGA_REALIZATION"


opt = st.one_of(st.none(), st.floats(0.01, 100))


@given(opt, opt, opt, st.floats(0, 1e6), st.floats(0, 1e6), st.booleans(), st.sampled_from(["", "K-1", "a/b"]))
def test_row_round_trip(p, q, nd, lhs, rhs, sur, variant):
    s = RatioSample("PITT_1", "gaussian(a=0.5)@lam=0.7", p, q, None, None, None, nd, lhs, rhs,
                    lhs / rhs if rhs else 0.0, sur, False, variant)
    row = s.to_row()
    assert tuple(row) == CSV_FIELDS
    assert RatioSample.from_row(row) == s
