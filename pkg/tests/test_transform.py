import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from conftest import LAMBDAS, gaussian
from dunkl.errors import InvalidParameterError, ResolutionError, TruncationError
from dunkl.measure import RadialProfile, WeightParams, default_grid, make_grid, measure_weights, weighted_lp_norm
from dunkl.specfun import dunkl_kernel_rank1
from dunkl.transform import (dunkl_transform_radial, dunkl_transform_rank1, inverse_dunkl_transform_radial,
                             inverse_dunkl_transform_rank1, kernel_matrix)


@pytest.mark.parametrize("lam", LAMBDAS)
def test_gaussian_fixed_point(lam, grid):
    G = dunkl_transform_radial(gaussian(lam, 0.5, grid))
    assert np.max(np.abs(G.samples - np.exp(-G.s ** 2 / 2))) < 1e-8


@pytest.mark.parametrize("lam", [0.2, 1.5])
@pytest.mark.parametrize("a", [0.125, 2.0])
def test_scaled_gaussian(lam, a, grid):
    G = dunkl_transform_radial(gaussian(lam, a, grid))
    ref = (2 * a) ** (-(lam + 1)) * np.exp(-G.s ** 2 / (4 * a))
    assert np.max(np.abs(G.samples - ref)) < 1e-10


@pytest.mark.parametrize("lam", LAMBDAS)
def test_plancherel_and_inversion(lam, grid):
    f = RadialProfile.from_function(lambda r: (1 + r ** 2) * np.exp(-0.7 * r ** 2) + np.exp(-r ** 4),
                                    WeightParams(lam), grid)
    G = dunkl_transform_radial(f)
    mw = measure_weights(grid, lam)
    assert math.sqrt(np.dot(G.samples ** 2, mw)) == pytest.approx(weighted_lp_norm(f, 2), rel=1e-10)
    back = inverse_dunkl_transform_radial(G)
    err = math.sqrt(np.dot((back.samples - f.samples) ** 2, mw)) / weighted_lp_norm(f, 2)
    assert err < 1e-10


def test_direct_quadrature_oracle():
    lam = 0.7
    f = gaussian(lam, 1.0, default_grid())
    G = dunkl_transform_radial(f)
    c = WeightParams(lam).constant
    from scipy.special import jv, gamma
    for target in (0.3, 2.0, 5.0):
        i = int(np.argmin(np.abs(G.s - target)))
        s = G.s[i]
        val = integrate.quad(lambda r: c * math.exp(-r * r) * 2 ** lam * gamma(lam + 1) * (r * s) ** (-lam)
                             * jv(lam, r * s) * r ** (2 * lam + 1), 0, 12, limit=200, epsabs=1e-15)[0]
        assert G.samples[i] == pytest.approx(val, abs=1e-10)


def test_resolution_error(grid):
    f = RadialProfile(grid, np.exp(-grid.nodes ** 2), WeightParams(0.7), dual_grid=grid.scaled(500.0))
    with pytest.raises(ResolutionError):
        dunkl_transform_radial(f)


def test_truncation_error(grid):
    f = RadialProfile.from_function(lambda r: 1 / (1 + r ** 2), WeightParams(0.7), grid)
    with pytest.raises(TruncationError):
        dunkl_transform_radial(f)


def test_kernel_shared_across_dilations(grid):
    a = kernel_matrix(grid.scaled(2.0), grid.scaled(8.0), 0.7)
    b = kernel_matrix(grid.scaled(4.0), grid.scaled(4.0), 0.7)
    assert a is b
    small = make_grid(4.0, 4, 8)
    K = kernel_matrix(small, grid, 0.7)
    assert K.shape == (small.size, grid.size)
    assert kernel_matrix(grid, small, 0.7).shape == (grid.size, small.size)


def rank1_oracle(f, k, y):
    """``int_R f(x) conj(e_k(x, y)) |x|^{2k} dx`` normalized so that ``exp(-x^2/2)`` is fixed."""
    lam = k - 0.5
    norm = 2 ** (lam + 1) * math.gamma(lam + 1)

    def part(fn):
        return integrate.quad(fn, -14, 14, limit=400, epsabs=1e-14, points=[0.0])[0]
    re = part(lambda x: f(x) * np.real(np.conj(dunkl_kernel_rank1(k, x, y))) * abs(x) ** (2 * k))
    im = part(lambda x: f(x) * np.imag(np.conj(dunkl_kernel_rank1(k, x, y))) * abs(x) ** (2 * k))
    return (re + 1j * im) / norm


@pytest.mark.parametrize("k", [0.0, 0.5, 1.2])
def test_rank1_matches_quadrature(k, grid):
    params = WeightParams.rank1(k)

    def f(x):
        return (1 + 0.5 * x) * math.exp(-x * x / 2) + x ** 3 * math.exp(-x * x)
    even = RadialProfile.from_function(lambda r: np.exp(-r * r / 2), params, grid)
    odd = RadialProfile.from_function(lambda r: 0.5 * r * np.exp(-r * r / 2) + r ** 3 * np.exp(-r * r), params, grid)
    Ge, Go = dunkl_transform_rank1(even, odd, k)
    for target, sign in ((0.4, 1), (1.7, 1), (2.3, -1)):
        i = int(np.argmin(np.abs(Ge.s - target)))
        y = sign * Ge.s[i]
        val = Ge.samples[i] + sign * Go.samples[i]
        assert val == pytest.approx(rank1_oracle(f, k, y), abs=1e-10)


def test_rank1_k0_is_fourier(grid):
    params = WeightParams.rank1(0.0)
    odd = RadialProfile.from_function(lambda r: r * np.exp(-r * r / 2), params, grid)
    even = RadialProfile.from_function(lambda r: np.zeros_like(r), params, grid)
    _, Go = dunkl_transform_rank1(even, odd, 0.0)
    # F(x e^{-x^2/2}) = -i y e^{-y^2/2} with the unitary normalization
    assert np.max(np.abs(Go.samples - (-1j * Go.s * np.exp(-Go.s ** 2 / 2)))) < 1e-9


def test_rank1_round_trip(grid):
    params = WeightParams.rank1(0.8)
    even = RadialProfile.from_function(lambda r: np.exp(-r * r / 2) * (1 + r * r), params, grid)
    odd = RadialProfile.from_function(lambda r: r * np.exp(-r * r), params, grid)
    fe, fo = inverse_dunkl_transform_rank1(*dunkl_transform_rank1(even, odd, 0.8), 0.8)
    assert np.max(np.abs(fe.samples - even.samples)) < 1e-9
    assert np.max(np.abs(fo.samples - odd.samples)) < 1e-9


def test_rank1_rejects_mismatched_params(grid):
    f = gaussian(0.7, 0.5, grid)
    with pytest.raises(InvalidParameterError):
        dunkl_transform_rank1(f, f, 1.0)
    with pytest.raises(InvalidParameterError):
        dunkl_transform_rank1(f, f, -1.0)


@settings(max_examples=15, deadline=None)
@given(coef=st.lists(st.floats(-2.0, 2.0), min_size=3, max_size=3),
       scales=st.lists(st.floats(0.2, 3.0), min_size=3, max_size=3))
def test_plancherel_property(coef, scales):
    grid = default_grid()
    f = RadialProfile.from_function(lambda r: sum(c * np.exp(-a * r * r) for c, a in zip(coef, scales)),
                                    WeightParams(0.7), grid)
    G = dunkl_transform_radial(f)
    lhs = math.sqrt(np.dot(G.samples ** 2, measure_weights(grid, 0.7)))
    assert lhs == pytest.approx(weighted_lp_norm(f, 2), rel=1e-9, abs=1e-12)
