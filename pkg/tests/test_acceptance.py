"""Acceptance criteria, each at its stated tolerance.

Every test prints one PASS/FAIL line; the lines are also collected and
repeated in the terminal summary.
"""
import time

import numpy as np
import pytest

from bctoda import verify as V
from bctoda.model import SpectralTuple, make_params

from conftest import ACCEPTANCE_LINES

CHECKS = V.default_checks()


def record(number: int, title: str, ok: bool, detail: str):
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok


def _summ(reports):
    return "; ".join(f"{r.name} {r.residual:.2e} <= {r.tolerance:.0e}" for r in reports)


def test_c01_symbolic_identities():
    t0 = time.perf_counter()
    rep = CHECKS["symbolic_all"]()
    dt = time.perf_counter() - t0
    ok = rep.passed and dt < 60
    record(1, "symbolic identities exact", ok,
           f"{len(rep.metadata['results'])} identities, failed={rep.metadata['failed']}, {dt:.1f} s")
    assert ok


def test_c02_one_particle_agreement():
    t0 = time.perf_counter()
    rep = V.check_one_particle_agreement(gs=(0.75, 1.0, 2.0), beta=1.0, tol=1e-6)
    dt = time.perf_counter() - t0
    ok = rep.passed and dt < 120
    record(2, "three one-particle routes agree", ok, f"max rel diff {rep.residual:.2e}, {dt:.1f} s")
    assert ok


def test_c03_eigen_equations():
    t0 = time.perf_counter()
    g1 = make_params(0.5, 1.0)
    n1 = V.check_eigen_bc(1, SpectralTuple([1.0]), g1, [(x,) for x in (-1, 0, 1, 2, 3)], h=1e-2, tol=1e-5)
    pts = [(0.3, 1.2), (0.8, 1.9), (-0.2, 0.9)]
    s1 = V.check_eigen_bc(2, SpectralTuple([0.6, 1.1]), g1, pts, tol=1e-3, s=1)
    s2 = V.check_eigen_bc(2, SpectralTuple([0.6, 1.1]), g1, pts, tol=5e-3, s=2)
    dt = time.perf_counter() - t0
    reps = [n1, s1, s2]
    ok = all(r.passed for r in reps) and dt < 1800
    record(3, "eigen-equation residuals", ok, f"{_summ(reps)}, {dt:.1f} s")
    assert ok


def test_c04_signed_permutations():
    rng = np.random.default_rng(2024)
    pts = [tuple(p) for p in rng.uniform(-0.5, 2.0, (5, 2))]
    rep = V.check_signed_permutations(SpectralTuple([0.6, 1.1]), make_params(0.5, 1.0), pts, factor=2.0)
    record(4, "signed-permutation symmetry", rep.passed,
           f"max |diff| / (2 x combined error) = {rep.residual:.2e}")
    assert rep.passed


def test_c05_baxter_diagonalization():
    reps = [CHECKS["baxter_eigen_gl"](), CHECKS["baxter_eigen_bc"]()]
    assert reps[0].tolerance == 1e-5 and reps[1].tolerance == 1e-4
    ok = all(r.passed for r in reps)
    record(5, "Baxter operator eigenvalues", ok, _summ(reps))
    assert ok


def test_c06_baxter_equation():
    rep = V.check_baxter_equation(make_params(1.5, 1.0), 0.6 - 0.5j, None,
                                  [(x,) for x in (-0.5, 0.0, 1.0)], tol=1e-3)
    record(6, "Baxter difference equation", rep.passed, _summ([rep]))
    assert rep.passed


def test_c07_d_action():
    rep = V.check_dl_relation(make_params(1.5, 1.0), 1.0, [(x,) for x in (0.0, 1.0, 2.0)], tol=1e-4)
    record(7, "D-entry shift relation", rep.passed, _summ([rep]))
    assert rep.passed


def test_c08_qq_commutativity():
    reps = [CHECKS["qq_commute_bc"](), CHECKS["qq_commute_gl"]()]
    assert reps[0].tolerance == 1e-3 and reps[1].tolerance == 1e-4
    ok = all(r.passed for r in reps)
    record(8, "Baxter operators commute", ok, _summ(reps))
    assert ok


def test_c09_kernel_odes():
    reps = [V.check_kernel_ode("K", npoints=100), V.check_kernel_ode("R", npoints=100)]
    ratios = [x for r in reps for x in r.metadata["ratios"]]
    ok = all(12.0 <= x <= 20.0 for x in ratios)
    record(9, "kernel ODE fourth-order convergence", ok,
           f"{len(ratios)} step-halving ratios in [{min(ratios):.2f}, {max(ratios):.2f}], band 16 +- 4")
    assert ok


def test_c10_beta_limit():
    rep = V.check_beta_limit(1.0, [1e-2, 1e-3, 1e-4], 1.0, [0.0])
    ratios = rep.metadata["ratios"]
    ok = all(7.0 <= r <= 13.0 for r in ratios)
    record(10, "linear approach to the beta -> 0 limit", ok,
           f"decade ratios {[f'{r:.1f}' for r in ratios]} (need 10 +- 30%), "
           f"observed order {[f'{o:.2f}' for o in rep.metadata['observed_order']]}")
    assert ok


def test_c11_decay_bound():
    rep = V.check_decay_bound(make_params(0.5, 1.0), npoints=20)
    ok = rep.passed
    record(11, "sub-exponential growth of normalized |Psi|", ok,
           f"worst excess slope {rep.residual:.2e} over rays n1_x1, n2_x1, n2_gap")
    assert ok
