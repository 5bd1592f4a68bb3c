"""Numeric residual checks of the operator identities.

Differential operators come from the exact algebra and are applied by
fourth-order central differences.  All stencil points of one evaluation point
are evaluated in a single batched call, so every stencil value shares the
same quadrature nodes and the quadrature error is a smooth function of the
coordinates; this keeps finite differences of quadrature output meaningful.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Callable, Sequence

import numpy as np

from . import opalg
from .eigenfunctions import (
    decay_envelope,
    phi_n,
    psi1,
    psi_mb1,
    psi_n,
    psi_whittaker,
)
from .errors import BoxMarginError, DomainError, UnknownCheckError
from .kernels import (
    apply_Q_bc,
    apply_Q_gl,
    baxter_eigenvalue_bc,
    baxter_eigenvalue_gl,
    kernel_pde_residual_K,
    kernel_pde_residual_R,
    z1_integral,
)
from .model import ModelParams, Point, SampledFunction, SpectralTuple, build_cache, default_box_left, make_params
from .numerics import DEFAULT_SPEC, QuadratureSpec

SCHEME_ORDER = 4


@dataclass(frozen=True)
class FDOperator:
    terms: tuple            # ((coefficient, exp_weights, der_orders), ...)
    step: float = 1e-2
    scheme_order: int = SCHEME_ORDER

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be positive")
        for _, _, k in self.terms:
            if sum(k) > 4:
                raise ValueError("derivative order above 4 is not supported")

    def with_step(self, h: float) -> "FDOperator":
        return FDOperator(self.terms, h, self.scheme_order)

    @property
    def arity(self) -> int:
        return len(self.terms[0][1]) if self.terms else 0


@dataclass
class CheckReport:
    name: str
    residual: float
    tolerance: float
    passed: bool = field(init=False)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.residual <= self.tolerance)

    def to_json(self) -> str:
        d = asdict(self)
        d = {"name": d["name"], "residual": d["residual"], "tolerance": d["tolerance"],
             "passed": d["passed"], "metadata": d["metadata"]}
        return json.dumps(d, sort_keys=True, default=_json_default)


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


# ---------------------------------------------------------------------------
# finite differences


@lru_cache(maxsize=None)
def fd_weights(k: int) -> tuple:
    """Central weights (offsets, weights) for d^k with fourth-order accuracy, exact rationals."""
    if k == 0:
        return (0,), (1.0,)
    m = (k + 1) // 2 + 1
    offs = list(range(-m, m + 1))
    npts = len(offs)
    # solve sum_j w_j o_j^p = p! delta_{pk} for p < npts
    a = [[Fraction(o) ** p for o in offs] for p in range(npts)]
    b = [Fraction(math.factorial(k)) if p == k else Fraction(0) for p in range(npts)]
    for col in range(npts):
        piv = next(r for r in range(col, npts) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        b[col], b[piv] = b[piv], b[col]
        for r in range(npts):
            if r != col and a[r][col] != 0:
                fac = a[r][col] / a[col][col]
                a[r] = [x - fac * y for x, y in zip(a[r], a[col])]
                b[r] = b[r] - fac * b[col]
    w = [b[i] / a[i][i] for i in range(npts)]
    return tuple(offs), tuple(float(x) for x in w)


def _stencil(op: FDOperator, h: float):
    """Distinct integer offsets used by op, plus per-term lists of (offset, weight)."""
    per_term = []
    offsets = set()
    for coef, a, k in op.terms:
        axes = [list(zip(*fd_weights(kk))) for kk in k]
        entries = []
        for combo in product(*axes):
            off = tuple(o for o, _ in combo)
            w = np.prod([wt for _, wt in combo]) / h ** sum(k)
            entries.append((off, w))
            offsets.add(off)
        per_term.append((coef, a, entries))
    return sorted(offsets), per_term


def _margin_check(f: SampledFunction, at, h: float, order: int):
    if f.cache is None:
        return
    need = 2 * order * h
    for c, (lo, hi) in zip(at, f.cache.box):
        if not (lo + need <= c <= hi - need):
            raise BoxMarginError(f"point {tuple(at)} is closer than {need} to the cache box edge")


def _evaluate(f, coords):
    if isinstance(f, SampledFunction):
        return f.direct(*coords)
    return np.asarray(f(*coords), dtype=complex)


def fd_apply(op: FDOperator, f, at, h: float | None = None) -> complex:
    """Apply op to f at one point by central differences (one batched call of f)."""
    at = tuple(at.coords) if isinstance(at, Point) else tuple(float(c) for c in np.atleast_1d(at))
    h = op.step if h is None else h
    if isinstance(f, SampledFunction):
        _margin_check(f, at, h, op.scheme_order)
    offsets, per_term = _stencil(op, h)
    index = {o: i for i, o in enumerate(offsets)}
    coords = [np.array([at[d] + h * o[d] for o in offsets]) for d in range(len(at))]
    vals = _evaluate(f, coords)
    total = 0j
    x = np.array(at)
    for coef, a, entries in per_term:
        deriv = sum(w * vals[index[o]] for o, w in entries)
        total += coef * math.exp(float(np.dot(a, x))) * deriv
    return complex(total)


def fd_apply_richardson(op: FDOperator, f, at, h: float | None = None):
    """(extrapolated, value at h, value at h/2)."""
    h = op.step if h is None else h
    a1 = fd_apply(op, f, at, h)
    a2 = fd_apply(op, f, at, h / 2)
    return (16 * a2 - a1) / 15, a1, a2


def fd_sampled(op: FDOperator, f, decay_class: str = "poly_at_plus_infinity") -> SampledFunction:
    """op f as a vectorized function, for feeding FD output to integral operators."""
    offsets, per_term = _stencil(op, op.step)
    h = op.step

    def evaluate(*xs):
        xs = [np.asarray(x, dtype=float) for x in xs]
        shifted = {o: _evaluate(f, [x + h * oo for x, oo in zip(xs, o)]) for o in offsets}
        total = np.zeros(xs[0].shape, dtype=complex)
        for coef, a, entries in per_term:
            deriv = sum(w * shifted[o] for o, w in entries)
            total = total + coef * np.exp(sum(ai * x for ai, x in zip(a, xs))) * deriv
        return total

    return SampledFunction(op.arity, evaluate, decay_class)


# ---------------------------------------------------------------------------
# helpers


def elementary_symmetric(values: Sequence[complex], s: int) -> complex:
    return sum(np.prod(c) for c in combinations(values, s)) if s else 1.0


def _params_subs(params: ModelParams | None, **extra):
    d = dict(extra)
    if params is not None:
        d.update(alpha=params.alpha, beta=params.beta)
    return d


def bc_hamiltonian_fd(n: int, s: int, params: ModelParams, h: float = 1e-2) -> FDOperator:
    return opalg.to_numeric_applier(opalg.extract_hamiltonians(n, "BC")[s - 1], _params_subs(params), h)


def gl_hamiltonian_fd(n: int, s: int, h: float = 1e-2) -> FDOperator:
    return opalg.to_numeric_applier(opalg.extract_hamiltonians(n, "GL")[s - 1], {}, h)


def _relative_residuals(op: FDOperator, f, points, eigenvalue: complex):
    rich, raw_h, raw_h2 = [], [], []
    for pt in points:
        val = complex(_evaluate(f, [np.array([c]) for c in pt])[0])
        ext, a1, a2 = fd_apply_richardson(op, f, pt)
        scale = abs(val)
        rich.append(abs(ext - eigenvalue * val) / scale)
        raw_h.append(abs(a1 - eigenvalue * val) / scale)
        raw_h2.append(abs(a2 - eigenvalue * val) / scale)
    return np.array(rich), np.array(raw_h), np.array(raw_h2)


def _report(name, rich, raw_h, raw_h2, tol, **meta):
    meta.update(residual_h=float(np.max(raw_h)), residual_h2=float(np.max(raw_h2)),
                fd_ratio=float(np.max(raw_h) / max(np.max(raw_h2), 1e-300)))
    return CheckReport(name, float(np.max(rich)), tol, meta)


# ---------------------------------------------------------------------------
# checks


def check_eigen_bc(n: int, spectral: SpectralTuple, params: ModelParams, points, h: float = 1e-2,
                   tol: float = 1e-5, s: int | None = None, spec: QuadratureSpec = DEFAULT_SPEC) -> CheckReport:
    """H_s Psi = (-1)^s e_s(lambda^2) Psi for the BC chain (all s <= n unless s is given)."""
    if n != spectral.n or n > 2:
        raise DomainError("check_eigen_bc supports n <= 2 with matching spectral data")
    lam2 = [l * l for l in spectral.lambdas]
    f = SampledFunction(n, lambda *xs: psi_n(spectral, params, xs, spec).value, "poly_at_plus_infinity")
    svals = [s] if s else list(range(1, n + 1))
    worst = None
    for ss in svals:
        op = bc_hamiltonian_fd(n, ss, params, h)
        ev = (-1) ** ss * elementary_symmetric(lam2, ss)
        rep = _report(f"eigen_bc_n{n}_s{ss}", *_relative_residuals(op, f, points, ev), tol, s=ss)
        if worst is None or rep.residual > worst.residual:
            worst = rep
    if s is None:
        worst.name = f"eigen_bc_n{n}"
    return worst


def check_eigen_gl(n: int, spectral: SpectralTuple, points, h: float = 1e-2, tol: float = 1e-5,
                   s: int | None = None, spec: QuadratureSpec = DEFAULT_SPEC) -> CheckReport:
    """H_s Phi = (-1)^s e_s(lambda) Phi, read off A_n(u) Phi = prod (u - lambda_j) Phi."""
    if n != spectral.n or n > 2:
        raise DomainError("check_eigen_gl supports n <= 2 with matching spectral data")
    f = SampledFunction(n, lambda *xs: phi_n(spectral, xs, spec).value)
    svals = [s] if s else list(range(1, n + 1))
    worst = None
    for ss in svals:
        op = gl_hamiltonian_fd(n, ss, h)
        ev = (-1) ** ss * elementary_symmetric(spectral.lambdas, ss)
        rep = _report(f"eigen_gl_n{n}_s{ss}", *_relative_residuals(op, f, points, ev), tol, s=ss)
        if worst is None or rep.residual > worst.residual:
            worst = rep
    if s is None:
        worst.name = f"eigen_gl_n{n}"
    return worst


def check_baxter_eigen(family: str, lam_test: complex, spectral: SpectralTuple, params: ModelParams | None,
                       points, tol: float, spec: QuadratureSpec = DEFAULT_SPEC) -> CheckReport:
    """Q(lam_test) applied to the n = 1 eigenfunction against the Gamma-product eigenvalue."""
    family = family.upper()
    if spectral.n != 1:
        raise DomainError("check_baxter_eigen is implemented for n = 1")
    lam1 = spectral.lambdas[0].real
    xs = np.array([p[0] for p in points], dtype=float)
    if family == "BC":
        if not -params.g < lam_test.imag < 0:
            raise DomainError("Im lambda_test must lie in (-g, 0)")
        f = SampledFunction(1, lambda y: psi1(lam1, params, y, spec).value, "poly_at_plus_infinity")
        q = baxter_eigenvalue_bc(lam_test, [lam1], params)
        lhs = np.atleast_1d(apply_Q_bc(lam_test, params, f, (xs,), spec).value)
        direct = np.atleast_1d(psi1(lam1, params, xs, spec).value)
    elif family == "GL":
        if not lam_test.imag < 0:
            raise DomainError("Im lambda_test must be negative")
        f = SampledFunction(1, lambda y: np.exp(1j * lam1 * y), "poly_at_plus_infinity")
        q = baxter_eigenvalue_gl(lam_test, [lam1])
        lhs = np.atleast_1d(apply_Q_gl(lam_test, f, (xs,), spec).value)
        direct = np.exp(1j * lam1 * xs)
    else:
        raise ValueError(f"unknown family {family!r}")
    res = np.abs(lhs - q * direct) / np.abs(q * direct)
    return CheckReport(f"baxter_eigen_{family.lower()}", float(res.max()), tol,
                       {"eigenvalue": q, "lambda_test": lam_test, "per_point": res})


def gaussian(scale: complex = 1.0) -> SampledFunction:
    return SampledFunction(1, lambda x: scale * np.exp(-np.asarray(x) ** 2), "poly_at_plus_infinity")


def check_baxter_equation(params: ModelParams, lam: complex, testfn: SampledFunction | None, points,
                          tol: float = 1e-3, h: float = 1e-2, spec: QuadratureSpec = DEFAULT_SPEC,
                          prefactor_sign: float = 1.0) -> CheckReport:
    """Q(lam) B(lam) phi = -beta (g + i lam)/(2 lam) Q(lam - i) phi at n = 1."""
    if not params.g > 1:
        raise DomainError("the Baxter equation check needs g > 1")
    if not 1 - params.g < lam.imag < 0:
        raise DomainError("Im lambda must lie in (1 - g, 0)")
    phi = testfn if testfn is not None else gaussian()
    b_op = opalg.to_numeric_applier(opalg.monodromy_bc(1)[0, 1], _params_subs(params, u=lam), h)
    # Richardson-combined B phi so the FD error is far below the quadrature tolerance
    b_h = fd_sampled(b_op, phi)
    b_h2 = fd_sampled(b_op.with_step(h / 2), phi)
    b_phi = SampledFunction(1, lambda y: (16 * b_h2.direct(y) - b_h.direct(y)) / 15, "poly_at_plus_infinity")
    xs = np.array([p[0] for p in points], dtype=float)
    lhs = np.atleast_1d(apply_Q_bc(lam, params, b_phi, (xs,), spec).value)
    factor = -prefactor_sign * params.beta * (params.g + 1j * lam) / (2 * lam)
    rhs = factor * np.atleast_1d(apply_Q_bc(lam - 1j, params, phi, (xs,), spec).value)
    res = np.abs(lhs - rhs) / np.abs(rhs)
    return CheckReport("baxter_equation", float(res.max()), tol, {"per_point": res, "lambda": lam})


def check_dl_relation(params: ModelParams, lam: float, points, tol: float = 1e-4, h: float = 1e-2,
                      spec: QuadratureSpec = DEFAULT_SPEC, prefactor_sign: float = 1.0) -> CheckReport:
    """D_1(lam) Psi_lam = -beta (g + i lam) Psi_{lam - i}."""
    if not params.g > 1:
        raise DomainError("the D-action check needs g > 1")
    d_op = opalg.to_numeric_applier(opalg.monodromy_bc(1)[1, 1], _params_subs(params, u=lam), h)
    f = SampledFunction(1, lambda x: psi1(lam, params, x, spec).value, "poly_at_plus_infinity")
    res = []
    for p in points:
        ext, _, _ = fd_apply_richardson(d_op, f, p)
        rhs = -prefactor_sign * params.beta * (params.g + 1j * lam) * psi1(lam - 1j, params, p[0], spec).value
        res.append(abs(ext - rhs) / abs(rhs))
    return CheckReport("dl_relation", float(max(res)), tol, {"per_point": res})


def _q_apply(family, lam, params, phi, xs, spec):
    if family == "BC":
        return np.atleast_1d(apply_Q_bc(lam, params, phi, (xs,), spec).value)
    return np.atleast_1d(apply_Q_gl(lam, phi, (xs,), spec).value)


def _q_cached(family, lam, params, phi, box, spec, degrees=(96, 160, 256)):
    f = SampledFunction(1, lambda y: _chunk_q(family, lam, params, phi, y, spec), "poly_at_plus_infinity")
    last = None
    for d in degrees:
        try:
            return build_cache(f, box, d, rel_threshold=1e-9)
        except Exception as exc:  # CacheAccuracyError
            last = exc
    raise last


def _chunk_q(family, lam, params, phi, y, spec, chunk=64):
    y = np.asarray(y, dtype=float)
    flat = y.reshape(-1)
    out = np.empty(flat.size, dtype=complex)
    for i in range(0, flat.size, chunk):
        out[i:i + chunk] = _q_apply(family, lam, params, phi, flat[i:i + chunk], spec)
    return out.reshape(y.shape)


def check_qq_commute(family: str, lam: complex, rho: complex, params: ModelParams | None,
                     testfn: SampledFunction | None, points, tol: float,
                     spec: QuadratureSpec = DEFAULT_SPEC) -> CheckReport:
    """Q(lam) Q(rho) phi = Q(rho) Q(lam) phi with the inner application cached on a box."""
    family = family.upper()
    phi = testfn if testfn is not None else gaussian()
    for z in (lam, rho):
        if family == "BC" and not -params.g < z.imag < 0:
            raise DomainError("spectral points must satisfy Im in (-g, 0)")
        if family == "GL" and not z.imag < 0:
            raise DomainError("spectral points must have negative imaginary part")
    xs = np.array([p[0] for p in points], dtype=float)
    decay = abs(lam.imag) + abs(rho.imag)
    hi = float(xs.max()) + min(30.0 / decay, 70.0)
    lo = default_box_left(params) if family == "BC" else float(xs.min()) - 8.0

    def side(a, b):
        inner = _q_cached(family, b, params, phi, [(lo, hi)], spec)
        return _q_apply(family, a, params, inner, xs, spec), inner.cache.probe_error

    if lam == rho:
        v1, e1 = side(lam, rho)
        v2, e2 = v1, e1
    else:
        v1, e1 = side(lam, rho)
        v2, e2 = side(rho, lam)
    res = np.abs(v1 - v2) / np.abs(v1)
    return CheckReport(f"qq_commute_{family.lower()}", float(res.max()), tol,
                       {"per_point": res, "cache_probe_errors": [e1, e2], "box": [lo, hi]})


def beta_limit_differences(alpha: float, betas: Sequence[float], lam: complex, x_points,
                           spec: QuadratureSpec = QuadratureSpec(rel_tol=1e-12, abs_tol=0.0)):
    """Relative difference of the eigenfunction with full and limiting boundary weight, per beta.

    The common prefactor and the plane wave cancel in the ratio, so only the
    z_1 integrals are compared.
    """
    xs = np.asarray(x_points, dtype=float)
    diffs = []
    for b in betas:
        p = make_params(alpha, b)
        s1, l1, _ = z1_integral(lam, p, xs, spec, "full")
        s2, l2, _ = z1_integral(lam, p, xs, spec, "limit")
        full = s1 * np.exp(l1)
        lim = s2 * np.exp(l2)
        diffs.append(float(np.max(np.abs(full - lim) / np.abs(lim))))
    return diffs


def check_beta_limit(alpha: float, betas: Sequence[float], lam: complex, x_points,
                     tol: float = 0.3) -> CheckReport:
    """The full-weight eigenfunction approaches the limiting one linearly in beta.

    Residual is the worst relative deviation of successive difference ratios
    from the beta ratio (10 for a decade step).
    """
    if alpha <= 0:
        raise DomainError("the beta -> 0 check needs alpha > 0")
    diffs = beta_limit_differences(alpha, betas, lam, x_points)
    ratios = [diffs[i] / diffs[i + 1] for i in range(len(diffs) - 1)]
    expected = [betas[i] / betas[i + 1] for i in range(len(betas) - 1)]
    dev = [abs(r / e - 1) for r, e in zip(ratios, expected)]
    orders = [math.log(r) / math.log(e) for r, e in zip(ratios, expected)]
    return CheckReport("beta_limit", float(max(dev)), tol,
                       {"differences": diffs, "ratios": ratios, "observed_order": orders})


def check_kernel_ode(kind: str, seed: int = 0, npoints: int = 100, h: float = 2e-2,
                     band: tuple = (12.0, 20.0), trials: int = 5) -> CheckReport:
    """Fourth-order convergence of the kernel ODE residuals under step halving.

    For each relation the ratio of residual norms over all random points at
    h and h/2 must fall inside ``band`` (16 +- 4).  Residual reported is the
    worst distance of a ratio from 16, tolerance 4.
    """
    rng = np.random.default_rng(seed)
    ratios = []
    for _ in range(trials if kind == "K" else 1):
        if kind == "K":
            p = make_params(rng.uniform(-0.2, 1.5), rng.uniform(0.5, 2.0))
            v = rng.uniform(-2, 2) + 1j * rng.uniform(-p.g + 0.1, 1.0)
            x = rng.uniform(-1, 2, npoints)
            y = p.log_beta + rng.uniform(0.3, 3.0, npoints)
            a = kernel_pde_residual_K(v, p, x, y, h)
            b = kernel_pde_residual_K(v, p, x, y, h / 2)
        elif kind == "R":
            v = rng.uniform(-2, 2) + 1j * rng.uniform(-1, 1)
            x1, x2, y = (rng.uniform(-2, 2, npoints) for _ in range(3))
            a = kernel_pde_residual_R(v, x1, x2, y, h)
            b = kernel_pde_residual_R(v, x1, x2, y, h / 2)
        else:
            raise ValueError(f"unknown kernel {kind!r}")
        for ra, rb in zip(a, b):
            ratios.append(float(np.linalg.norm(ra) / np.linalg.norm(rb)))
    center = 0.5 * (band[0] + band[1])
    return CheckReport(f"kernel_ode_{kind}", max(abs(r - center) for r in ratios), 0.5 * (band[1] - band[0]),
                       {"ratios": ratios, "h": h})


def check_one_particle_agreement(gs=(0.75, 1.0, 2.0), beta: float = 1.0, tol: float = 1e-6,
                                 lams=None, xs=None) -> CheckReport:
    """psi1, Mellin-Barnes and Whittaker-series values pairwise on a 5 x 5 (lambda, x) grid."""
    lams = np.linspace(0.3, 2.0, 5) if lams is None else np.asarray(lams)
    xs = np.linspace(-2.0, 4.0, 5) if xs is None else np.asarray(xs)
    worst = 0.0
    for g in gs:
        p = make_params((g - 0.5) * beta, beta)
        for lam in lams:
            a = np.atleast_1d(psi1(lam, p, xs).value)
            b = np.atleast_1d(psi_mb1(lam, p, xs).value)
            c = np.array([psi_whittaker(lam, p, x) for x in xs])
            for u, w in ((a, b), (a, c), (b, c)):
                worst = max(worst, float(np.max(np.abs(u - w) / np.abs(w))))
    return CheckReport("one_particle_agreement", worst, tol, {"g": list(gs)})


def check_signed_permutations(spectral: SpectralTuple, params: ModelParams, points,
                              factor: float = 2.0, spec: QuadratureSpec = DEFAULT_SPEC) -> CheckReport:
    """n = 2 eigenfunction invariant under swap and sign flips within factor x combined error."""
    l1, l2 = (l.real for l in spectral.lambdas)
    variants = [(l2, l1), (-l1, l2), (l1, -l2), (-l2, -l1)]
    coords = tuple(np.array([p[i] for p in points]) for i in range(2))
    base = psi_n(spectral, params, coords, spec)
    worst = 0.0
    for var in variants:
        other = psi_n(SpectralTuple(var), params, coords, spec)
        budget = factor * (np.asarray(base.error_estimate) + np.asarray(other.error_estimate))
        worst = max(worst, float(np.max(np.abs(base.value - other.value) / budget)))
    return CheckReport("signed_permutations", worst, 1.0, {"variants": variants})


def check_decay_bound(params: ModelParams, lams=(0.6, 1.1), npoints: int = 20,
                      max_growth: float = 6.0, spec: QuadratureSpec = DEFAULT_SPEC) -> CheckReport:
    """Normalized |Psi| / envelope grows at most polynomially along rays into the forbidden regions.

    Along each ray of parameter r the log of the normalized quantity is
    compared at the midpoint and the end: polynomial growth of degree <= 6
    allows an increase of at most 6 log(r_end / r_mid).  Residual is the
    worst excess slope, tolerance 0.
    """
    # ray lengths keep the envelope above the double-precision underflow
    r = np.linspace(0.5, 6.0, npoints)
    st1 = SpectralTuple(lams[:1])
    st2 = SpectralTuple(lams[:2])
    x2 = np.zeros_like(r)
    rays = [
        ("n1_x1", st1, (params.log_beta - r,)),
        ("n2_x1", st2, (params.log_beta - r, x2 + 1.0)),
        ("n2_gap", st2, (0.5 + r, x2)),
    ]
    excess = []
    meta = {}
    mid = npoints // 2
    for name, st, coords in rays:
        with np.errstate(divide="ignore", invalid="ignore"):
            logv = (np.log(np.abs(psi_n(st, params, coords, spec).value))
                    - np.log(decay_envelope(st, params, coords)))
        # an underflowed |Psi| (log = -inf) satisfies the bound; nan or +inf does not
        if np.any(np.isnan(logv)) or np.any(logv == np.inf):
            excess.append(math.inf)
        else:
            slope = (logv[-1] - np.max(logv[:mid + 1])) - max_growth * math.log(r[-1] / r[mid])
            excess.append(float(max(slope, 0.0)))
        meta[name] = logv.tolist()
    return CheckReport("decay_bound", max(excess), 0.0, meta)


def check_symbolic() -> CheckReport:
    results = opalg.symbolic_suite()
    failed = [k for k, ok in results.items() if not ok]
    return CheckReport("symbolic_all", float(len(failed)), 0.0, {"results": results, "failed": failed})


# ---------------------------------------------------------------------------
# suite


def _canonical():
    g1 = make_params(0.5, 1.0)
    g15 = make_params(1.0, 1.0)
    g2 = make_params(1.5, 1.0)
    return g1, g15, g2


def default_checks(overrides: dict | None = None) -> dict:
    """Named check thunks with the reference parameters (overrides: alpha, beta, tol)."""
    ov = dict(overrides or {})
    g1, g15, g2 = _canonical()
    if "alpha" in ov or "beta" in ov:
        user = make_params(ov.get("alpha", g1.alpha), ov.get("beta", g1.beta))
        g1 = g15 = g2 = user
    tol = ov.get("tol")

    def t(x):
        return x if tol is None else tol

    pts_n2 = [(0.3, 1.2), (0.8, 1.9), (-0.2, 0.9)]
    checks = {
        "symbolic_all": lambda: check_symbolic(),
        "one_particle_agreement": lambda: check_one_particle_agreement(tol=t(1e-6)),
        "eigen_bc_n1": lambda: check_eigen_bc(1, SpectralTuple([1.0]), g1, [(x,) for x in (-1, 0, 1, 2, 3)],
                                              tol=t(1e-5)),
        "eigen_bc_n1_zero": lambda: check_eigen_bc(1, SpectralTuple([0.0]), g1, [(x,) for x in (-1, 0, 1, 2, 3)],
                                                   tol=t(1e-5)),
        "eigen_bc_n2_s1": lambda: check_eigen_bc(2, SpectralTuple([0.6, 1.1]), g1, pts_n2, tol=t(1e-3), s=1),
        "eigen_bc_n2_s2": lambda: check_eigen_bc(2, SpectralTuple([0.6, 1.1]), g1, pts_n2, tol=t(5e-3), s=2),
        "eigen_gl_n1": lambda: check_eigen_gl(1, SpectralTuple([1.0]), [(x,) for x in (-1, 0, 1)], tol=t(1e-7)),
        "eigen_gl_n2": lambda: check_eigen_gl(2, SpectralTuple([0.6, 1.1]), [(0.0, 1.0), (0.5, 0.5), (-0.5, 1.5)],
                                              tol=t(1e-4)),
        "signed_permutations": lambda: check_signed_permutations(
            SpectralTuple([0.6, 1.1]), g1, [(0.3, -0.4), (0.0, 1.0), (1.0, 0.5), (-0.5, 0.2), (0.7, 2.0)]),
        "baxter_eigen_gl": lambda: check_baxter_eigen("GL", 0.5 - 0.3j, SpectralTuple([1.0]), None,
                                                      [(x,) for x in (-1, 0, 1)], t(1e-5)),
        "baxter_eigen_bc": lambda: check_baxter_eigen("BC", 0.7 - 0.4j, SpectralTuple([0.9]), g15,
                                                      [(x,) for x in (-0.5, 0.5, 1.5)], t(1e-4)),
        "baxter_equation": lambda: check_baxter_equation(g2, 0.6 - 0.5j, None, [(x,) for x in (-0.5, 0.0, 1.0)],
                                                         t(1e-3)),
        "dl_relation": lambda: check_dl_relation(g2, 1.0, [(x,) for x in (0.0, 1.0, 2.0)], t(1e-4)),
        "qq_commute_bc": lambda: check_qq_commute("BC", 0.5 - 0.4j, 1.1 - 0.6j, g15, None,
                                                  [(x,) for x in (-0.5, 0.0, 0.5)], t(1e-3)),
        "qq_commute_gl": lambda: check_qq_commute("GL", 0.5 - 0.4j, 1.1 - 0.6j, None, None,
                                                  [(x,) for x in (-0.5, 0.0, 0.5)], t(1e-4)),
        "kernel_ode_K": lambda: check_kernel_ode("K"),
        "kernel_ode_R": lambda: check_kernel_ode("R"),
        "decay_bound": lambda: check_decay_bound(g1),
        "beta_limit": lambda: check_beta_limit(1.0, [1e-2, 1e-3, 1e-4], 1.0, [0.0]),
    }
    return checks


# beta_limit is excluded from the default run: its linear-rate criterion is not met (see README)
DEFAULT_SUITE = tuple(k for k in default_checks() if k != "beta_limit")


def run_suite(names: Sequence[str], config: dict | None = None) -> list:
    """Run named checks in the given order; unknown names raise before anything runs."""
    checks = default_checks(config)
    unknown = [n for n in names if n not in checks]
    if unknown:
        raise UnknownCheckError(f"unknown checks: {unknown}")
    return [checks[n]() for n in names]
