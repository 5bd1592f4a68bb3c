import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bctoda.errors import BLimitUnsupportedError, CacheAccuracyError, InvalidParamsError
from bctoda.model import (
    Point,
    SampledFunction,
    SpectralTuple,
    build_cache,
    cheb_coefficients,
    cheb_nodes,
    make_params,
)


def test_make_params_rejects():
    with pytest.raises(BLimitUnsupportedError):
        make_params(1.0, 0.0)
    with pytest.raises(InvalidParamsError):
        make_params(1.0, -1.0)
    with pytest.raises(InvalidParamsError):
        make_params(-1.0, 1.0)  # g = -1/2
    with pytest.raises(InvalidParamsError):
        make_params(float("nan"), 1.0)


@settings(max_examples=1000)
@given(st.floats(0.01, 50.0), st.floats(-0.49, 20.0))
def test_g_exact(beta, ratio):
    alpha = ratio * beta
    p = make_params(alpha, beta)
    assert abs(p.g - (0.5 + alpha / beta)) <= math.ulp(p.g)


def test_spectral_and_point():
    s = SpectralTuple([0.6, 1.1])
    assert s.n == 2 and s.is_real()
    assert not SpectralTuple([0.6 - 0.1j]).is_real()
    with pytest.raises(ValueError):
        SpectralTuple([])
    with pytest.raises(ValueError):
        Point((0.0, float("inf")))


def test_decay_class_tag():
    with pytest.raises(ValueError):
        SampledFunction(1, np.exp, "fast")


def test_cheb_coefficients_recover_polynomial():
    from numpy.polynomial import chebyshev as C
    coef = np.array([0.3, -1.0, 0.25, 2.0])
    t = cheb_nodes(8)
    got = cheb_coefficients(C.chebval(t, coef))
    assert np.allclose(got[:4], coef, atol=1e-14)
    assert np.allclose(got[4:], 0, atol=1e-14)


def test_cache_1d_and_outside_zero():
    f = SampledFunction(1, lambda x: np.exp(-x * x + 0.5j * x))
    cf = build_cache(f, [(-6.0, 6.0)], 80)
    xs = np.linspace(-5.9, 5.9, 301)
    assert np.max(np.abs(cf(xs) - f(xs))) <= 1e-7
    assert cf(7.0) == 0
    assert cf.direct(7.0) == f(7.0)


def test_cache_2d():
    f = SampledFunction(2, lambda x, y: np.exp(-x * x - 0.5 * y * y + 0.2 * x * y))
    cf = build_cache(f, [(-5, 5), (-6, 6)], (50, 60))
    rng = np.random.default_rng(1)
    x, y = rng.uniform(-5, 5, 200), rng.uniform(-6, 6, 200)
    assert np.max(np.abs(cf(x, y) - f(x, y))) <= 1e-7 * cf.cache.scale


def test_cache_accuracy_error():
    f = SampledFunction(1, lambda x: np.abs(x) + 0j)
    with pytest.raises(CacheAccuracyError):
        build_cache(f, [(-1, 1)], 10)


def test_scaled():
    f = SampledFunction(1, lambda x: np.exp(-x * x))
    cf = build_cache(f, [(-6, 6)], 60).scaled(2j)
    assert cf(0.3) == pytest.approx(2j * math.exp(-0.09), rel=1e-9)
