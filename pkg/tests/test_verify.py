import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bctoda.errors import BoxMarginError, DomainError, UnknownCheckError
from bctoda.eigenfunctions import psi1
from bctoda.model import SampledFunction, SpectralTuple, build_cache, make_params
from bctoda import verify as V


@pytest.mark.parametrize("k,expected", [
    (1, ((-2, -1, 0, 1, 2), (1 / 12, -2 / 3, 0.0, 2 / 3, -1 / 12))),
    (2, ((-2, -1, 0, 1, 2), (-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12))),
])
def test_fd_weights_known(k, expected):
    offs, w = V.fd_weights(k)
    assert offs == expected[0]
    assert np.allclose(w, expected[1], atol=1e-15)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_fd_weights_exact_on_polynomials(k):
    offs, w = V.fd_weights(k)
    o = np.array(offs, dtype=float)
    for p in range(len(offs)):
        target = math.factorial(k) if p == k else 0.0
        assert abs(np.dot(w, o ** p) - target) < 1e-10


def _h1(params, h=1e-2):
    return V.bc_hamiltonian_fd(1, 1, params, h)


def test_h1_on_gaussian_matches_analytic():
    p = make_params(0.5, 1.3)
    op = _h1(p)
    for x in (-0.7, 0.0, 0.4, 1.5):
        g = math.exp(-x * x)
        exact = (4 * x * x - 2) * g - (2 * p.alpha * math.exp(-x) + p.beta ** 2 * math.exp(-2 * x)) * g
        ext, a1, a2 = V.fd_apply_richardson(op, V.gaussian(), (x,))
        assert abs(ext - exact) < 1e-9
        assert abs(a1 - exact) < 1e-6


def test_fd_second_derivative_of_plane_wave():
    op = V.gl_hamiltonian_fd(1, 1)
    # GL H1 for one site is -i d/dx; e^{i l x} has eigenvalue l (sign fixed by (-1)^s e_1)
    lam = 0.8
    f = lambda x: np.exp(1j * lam * x)
    val = V.fd_apply(op, f, (0.3,))
    assert abs(abs(val) - lam) < 1e-8


def test_richardson_drops_error():
    p = make_params(0.5, 1.3)
    op = _h1(p, 4e-2)
    x = 0.4
    g = math.exp(-x * x)
    exact = (4 * x * x - 2) * g - (2 * p.alpha * math.exp(-x) + p.beta ** 2 * math.exp(-2 * x)) * g
    ext, a1, a2 = V.fd_apply_richardson(op, V.gaussian(), (x,))
    assert abs(a2 - exact) * 8 <= abs(a1 - exact)
    assert abs(ext - exact) * 8 <= abs(a2 - exact)


def test_box_margin_enforced():
    f = build_cache(V.gaussian(), [(-3.0, 3.0)], 60)
    op = _h1(make_params(0.5, 1.0))
    V.fd_apply(op, f, (0.0,))
    with pytest.raises(BoxMarginError):
        V.fd_apply(op, f, (2.95,))


@settings(max_examples=50)
@given(st.floats(0, 10), st.floats(0, 10))
def test_report_passed_iff_within_tolerance(r, t):
    rep = V.CheckReport("x", r, t)
    assert rep.passed == (r <= t)
    d = json.loads(rep.to_json())
    assert d["passed"] == rep.passed and d["name"] == "x"


def test_report_json_complex_and_arrays():
    rep = V.CheckReport("y", 0.1, 1.0, {"z": 1 + 2j, "a": np.arange(3)})
    d = json.loads(rep.to_json())
    assert d["metadata"]["z"] == [1.0, 2.0]
    assert d["metadata"]["a"] == [0, 1, 2]


def test_residual_scale_invariant():
    p = make_params(1.5, 1.0)
    pts = [(0.0,), (1.0,)]
    a = V.check_baxter_equation(p, 0.6 - 0.5j, V.gaussian(1.0), pts).residual
    b = V.check_baxter_equation(p, 0.6 - 0.5j, V.gaussian(1e6), pts).residual
    assert abs(a - b) <= 1e-12
    a = V.check_qq_commute("GL", 0.5 - 0.4j, 1.1 - 0.6j, None, V.gaussian(1.0), pts, 1e-4).residual
    b = V.check_qq_commute("GL", 0.5 - 0.4j, 1.1 - 0.6j, None, V.gaussian(1e6), pts, 1e-4).residual
    assert abs(a - b) <= 1e-12


def test_eigen_bc_n1_small_and_wrong_eigenvalue_large():
    p = make_params(0.5, 1.0)
    rep = V.check_eigen_bc(1, SpectralTuple([1.0]), p, [(0.0,), (1.0,)])
    assert rep.passed and rep.residual < 1e-8
    op = _h1(p)
    f = SampledFunction(1, lambda x: psi1(1.0, p, x).value)
    wrong = V._relative_residuals(op, f, [(0.0,)], -1.21)[0]
    assert wrong[0] > 0.1


def test_conjugate_spectral_is_not_symmetry():
    # psi(lam) and psi(conj lam) coincide for real lam; a genuinely complex
    # eigenvalue must not pass with the conjugated one
    p = make_params(0.5, 1.0)
    op = _h1(p)
    lam = 1.0 - 0.3j
    f = SampledFunction(1, lambda x: psi1(lam, p, x).value)
    good = V._relative_residuals(op, f, [(0.5,)], -lam * lam)[0][0]
    bad = V._relative_residuals(op, f, [(0.5,)], -np.conj(lam) ** 2)[0][0]
    assert good < 1e-6 and bad > 0.1


def test_prefactor_sign_mutation_is_detected():
    p = make_params(1.5, 1.0)
    ok = V.check_dl_relation(p, 1.0, [(0.0,), (1.0,)])
    bad = V.check_dl_relation(p, 1.0, [(0.0,), (1.0,)], prefactor_sign=-1.0)
    assert ok.passed and bad.residual > 0.5
    ok = V.check_baxter_equation(p, 0.6 - 0.5j, None, [(0.0,)])
    bad = V.check_baxter_equation(p, 0.6 - 0.5j, None, [(0.0,)], prefactor_sign=-1.0)
    assert ok.passed and bad.residual > 0.5


def test_domain_guards():
    p = make_params(0.5, 1.0)
    with pytest.raises(DomainError):
        V.check_dl_relation(p, 1.0, [(0.0,)])
    with pytest.raises(DomainError):
        V.check_baxter_eigen("BC", 0.7 + 0.4j, SpectralTuple([0.9]), make_params(1.0, 1.0), [(0.0,)], 1e-4)
    with pytest.raises(DomainError):
        V.check_beta_limit(-1.0, [1e-2, 1e-3], 1.0, [0.0])


def test_qq_same_point_is_exact():
    rep = V.check_qq_commute("GL", 0.5 - 0.4j, 0.5 - 0.4j, None, None, [(0.0,)], 1e-12)
    assert rep.residual == 0.0


def test_qq_gl_commute():
    rep = V.check_qq_commute("GL", 0.5 - 0.4j, 1.1 - 0.6j, None, None, [(-0.5,), (0.5,)], 1e-4)
    assert rep.passed


def test_small_beta_close_to_limit():
    d = V.beta_limit_differences(1.0, [1e-4], 1.0, [0.0])
    assert d[0] < 1e-3


def test_run_suite_behaviour():
    assert V.run_suite([]) == []
    with pytest.raises(UnknownCheckError):
        V.run_suite(["eigen_bc_n1", "no_such_check"])
    reps = V.run_suite(["eigen_bc_n1"])
    assert len(reps) == 1 and reps[0].name == "eigen_bc_n1" and reps[0].passed


def test_suite_overrides_tolerance():
    rep = V.run_suite(["eigen_bc_n1"], {"tol": 0.0})[0]
    assert not rep.passed and rep.tolerance == 0.0


def test_default_suite_names():
    assert "beta_limit" not in V.DEFAULT_SUITE
    assert set(V.DEFAULT_SUITE) < set(V.default_checks())
