import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from bctoda import opalg
from bctoda.errors import SizeLimitError, UnboundSymbolError
from bctoda.opalg import (
    ALPHA,
    BETA,
    I,
    U,
    OpPoly,
    Scalar,
    SpectralPoly,
    commutator,
    extract_hamiltonians,
    op_mul,
)

GOLDEN = Path(__file__).parent / "golden"


def d(k=1):
    return OpPoly.der(1, 1, k)


def e(b):
    return OpPoly.exp(1, 1, b)


def test_exp_past_derivative():
    # d e^{x} = e^{x} d + e^{x}
    assert op_mul(d(), e(1)) == op_mul(e(1), d()) + e(1)
    # d^2 e^{-2x} = e^{-2x}(d^2 - 4 d + 4)
    assert op_mul(d(2), e(-2)) == op_mul(e(-2), d(2) - 4 * d() + OpPoly.scalar(1, 4))


def test_canonical_commutator():
    x_like = e(1)
    assert commutator(d(), x_like) == x_like


def _rand_op(rng, sites=2):
    terms = {}
    for _ in range(rng.randint(1, 5)):
        a = tuple(rng.randint(-2, 2) for _ in range(sites))
        k = tuple(rng.randint(0, 2) for _ in range(sites))
        c = SpectralPoly.const(Scalar(Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3))))
        if rng.random() < 0.5:
            c = c * U
        terms[(a, k)] = terms.get((a, k), SpectralPoly()) + c
    return OpPoly(sites, terms)


@settings(max_examples=500)
@given(st.integers(0, 10 ** 9))
def test_ring_axioms(seed):
    rng = random.Random(seed)
    x, y, z = (_rand_op(rng) for _ in range(3))
    assert op_mul(op_mul(x, y), z) == op_mul(x, op_mul(y, z))
    assert op_mul(x, y + z) == op_mul(x, y) + op_mul(x, z)
    assert op_mul(x + y, z) == op_mul(x, z) + op_mul(y, z)


def test_spectral_poly_arithmetic():
    p = (U - I * Fraction(1, 2)) * (U + I * Fraction(1, 2))
    assert p == U * U + SpectralPoly.const(Fraction(1, 4))
    assert p.evaluate({"u": 2}) == pytest.approx(4.25)
    with pytest.raises(UnboundSymbolError):
        (U * ALPHA).evaluate({"u": 1})
    assert (U ** 3).degree("u") == 3


def test_symbolic_suite_all_exact():
    res = opalg.symbolic_suite()
    assert res and all(res.values()), [k for k, v in res.items() if not v]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_bc_hamiltonians_commute(n):
    assert opalg.hamiltonians_commute(n, "BC")
    assert opalg.hamiltonians_commute(n, "GL")


def test_h1_bc_one_site():
    (h1,) = extract_hamiltonians(1, "BC")
    expected = d(2) + e(-1) * (-2 * ALPHA) + e(-2) * (-(BETA ** 2))
    assert h1 == expected


def test_gl_two_site_hamiltonians():
    h1, h2 = extract_hamiltonians(2, "GL")
    assert h1 == OpPoly.der(2, 1, 1, I) + OpPoly.der(2, 2, 1, I)
    assert h2 == OpPoly.term(2, (0, 0), (1, 1), -1) + OpPoly.term(2, (1, -1), (0, 0), -1)


def test_d_entry_one_site():
    # lower-right monodromy entry at n = 1: -alpha - e^{x} (u - i/2)(-u + i d)
    dd = opalg.monodromy_bc(1)[1, 1]
    half = I * Fraction(1, 2)
    expected = (OpPoly.scalar(1, -ALPHA)
                - op_mul(e(1) * (U - half), OpPoly.scalar(1, -U) + d() * I))
    assert dd == expected


def test_size_limit():
    with pytest.raises(SizeLimitError):
        extract_hamiltonians(4, "BC")


def _mutated_lax(arg):
    # doubled derivative coefficient
    return opalg.MatrixOp([
        [OpPoly.scalar(1, arg) + OpPoly.der(1, 1, 1, I * 2), OpPoly.exp(1, 1, -1)],
        [OpPoly.exp(1, 1, 1, -1), OpPoly(1)],
    ])


def test_mutated_lax_breaks_yang_baxter():
    r = opalg.yang_r(1, U - opalg.V)
    res = opalg.verify_identity(*opalg.yang_baxter_sides(_mutated_lax(U), _mutated_lax(opalg.V), r))
    assert not res.holds and res.witness is not None


def test_mutated_k_breaks_reflection():
    k = opalg.k_matrix(1, U)
    bad = opalg.MatrixOp([[k[0, 0], k[0, 1]], [k[1, 0], k[1, 1] + OpPoly.scalar(1, 1)]])
    assert not opalg.verify_identity(*opalg.reflection_sides(bad, bad.subs({"u": opalg.V}), 1)).holds


def test_dump_golden():
    from bctoda.cli import symbolic_dump
    assert symbolic_dump("bc", 1) == (GOLDEN / "dump_bc_n1.txt").read_text()


def test_dump_deterministic():
    from bctoda.cli import symbolic_dump
    assert symbolic_dump("gl", 2) == symbolic_dump("gl", 2)
