import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bctoda.errors import DegenerateMuError, DomainError, SizeLimitError
from bctoda.eigenfunctions import (
    bc_backing,
    build_eigen_handle,
    decay_envelope,
    phi_n,
    psi1,
    psi_mb1,
    psi_n,
    psi_whittaker,
    whittaker_oracle,
)
from bctoda.model import SpectralTuple, default_box_left, make_params

# two-site open chain, closed form via mpmath.besselk (scripts/oracle_values.py)
PHI_GL2_REF = [((0.3, 1.2), 0.1554767936978289 + 0.5102011177314828j),
               ((-0.5, 0.2), 0.43440800843791955 - 0.11323920840099203j),
               ((1.0, -0.4), 0.018368204468140602 + 0.010274415260002872j)]


def test_phi2_closed_form():
    st2 = SpectralTuple([0.6, 1.1])
    for pt, ref in PHI_GL2_REF:
        assert abs(phi_n(st2, pt).value - ref) <= 1e-10 * abs(ref)


def test_phi1_plane_wave():
    r = phi_n(SpectralTuple([0.7]), (np.array([0.0, 1.0]),))
    assert np.allclose(r.value, np.exp(0.7j * np.array([0.0, 1.0])))


def test_whittaker_oracle_guards():
    with pytest.raises(DegenerateMuError):
        whittaker_oracle(0.1, 0.5, 1.0)
    with pytest.raises(DomainError):
        whittaker_oracle(0.1, 0.3j, -1.0)


@pytest.mark.parametrize("g", [0.75, 1.0, 2.0])
def test_three_routes_agree(g):
    p = make_params(g - 0.5, 1.0)
    xs = np.linspace(-2.0, 4.0, 5)
    for lam in (0.3, 1.15, 2.0):
        a = psi1(lam, p, xs).value
        b = psi_mb1(lam, p, xs).value
        c = np.array([psi_whittaker(lam, p, x) for x in xs])
        assert np.max(np.abs(a - c) / np.abs(c)) < 1e-6
        assert np.max(np.abs(b - c) / np.abs(c)) < 1e-6


def test_mb_needs_real_nonzero():
    p = make_params(0.5, 1.0)
    with pytest.raises(DomainError):
        psi_mb1(0.0, p, 0.0)
    with pytest.raises(DomainError):
        psi_mb1(0.5 - 0.1j, p, 0.0)


@settings(max_examples=20)
@given(st.floats(0.2, 2.5), st.floats(-1.5, 3.0), st.floats(0.6, 2.5), st.floats(0.5, 2.0))
def test_psi1_matches_whittaker_random(lam, x, g, beta):
    p = make_params((g - 0.5) * beta, beta)
    a = psi1(lam, p, x).value
    c = psi_whittaker(lam, p, x)
    assert abs(a - c) <= 1e-8 * abs(c)


def test_signed_permutations_n2():
    p = make_params(0.5, 1.0)
    rng = np.random.default_rng(7)
    pts = rng.uniform(-0.5, 2.0, (2, 10))
    base = psi_n(SpectralTuple([0.6, 1.1]), p, (pts[0], pts[1]))
    for lams in ([1.1, 0.6], [-0.6, 1.1], [0.6, -1.1], [-1.1, -0.6]):
        other = psi_n(SpectralTuple(lams), p, (pts[0], pts[1]))
        budget = 2 * (base.error_estimate + other.error_estimate)
        assert np.all(np.abs(base.value - other.value) <= budget)


def test_backing_cache_matches_direct():
    p = make_params(0.5, 1.0)
    st1 = SpectralTuple([0.8])
    cached = bc_backing(st1, p, 3.0, psi_n.__defaults__[0])
    lo, hi = cached.cache.box[0]
    ys = np.linspace(lo, hi, 157)
    direct = cached.direct(ys)
    assert np.max(np.abs(cached(ys) - direct)) <= 1e-7 * np.max(np.abs(direct))


def test_handle_gl():
    h = build_eigen_handle("gl", SpectralTuple([0.6, 1.1]), None, [(-3, 3), (-3, 3)], degree=40)
    assert h.n == 2 and h.family == "GL"
    pt, ref = PHI_GL2_REF[1]
    assert abs(h(*pt) - ref) <= 1e-6 * abs(ref)


def test_real_spectral_required_and_size():
    p = make_params(0.5, 1.0)
    with pytest.raises(DomainError):
        psi_n(SpectralTuple([0.5 - 0.1j]), p, (0.0,))
    with pytest.raises(SizeLimitError):
        psi_n(SpectralTuple([0.1, 0.2, 0.3]), p, (0.0, 0.0, 0.0))
    with pytest.raises(SizeLimitError):
        phi_n(SpectralTuple([0.1, 0.2, 0.3, 0.4]), (0.0,) * 4)


def test_decay_envelope_nonnegative_and_ray():
    p = make_params(0.5, 1.0)
    st1 = SpectralTuple([0.8])
    x = np.linspace(-3, 4, 30)
    env = decay_envelope(st1, p, (x,))
    assert np.all(env >= 0)
    ratio = np.abs(psi1(0.8, p, x).value) / env
    # bounded (not exponentially growing) toward the left wall
    assert ratio[:10].max() <= 10 * ratio[10:].max()
    assert default_box_left(p) == pytest.approx(-math.log(40.0))


@pytest.mark.slow
def test_psi3_qmc_is_seeded():
    p = make_params(0.5, 1.0)
    st3 = SpectralTuple([0.6, 1.1, 0.4])
    pt = (np.array([0.0]), np.array([0.8]), np.array([1.5]))
    a = psi_n(st3, p, pt, method="qmc", samples=512, seed=3)
    b = psi_n(st3, p, pt, method="qmc", samples=512, seed=3)
    assert a.value == b.value
    assert np.all(np.isfinite(a.value)) and np.all(a.error_estimate > 0)
