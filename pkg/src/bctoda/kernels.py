"""Integral operators of the open Toda chain with reflecting boundary.

Every applier takes the evaluation point(s) ``at`` as a Point or as a tuple
of broadcastable coordinate arrays and returns an IntegralResult whose value
has the broadcast shape.  Batching many points into one call shares the
quadrature nodes, which is what makes cache building and finite-difference
stencils cheap.

The z-integrals inside the raising and Baxter kernels decouple once the
outer y variables are fixed: the z_1 integral carries the boundary weight,
and every other z_j appears as

    int exp(-2 i lam z - a e^z - b e^-z) dz = (b/a)^(-i lam) int exp(-2 i lam u - c cosh u) du,

with c = 2 sqrt(a b).  Each factor is computed with its dominant real
exponential split off in log form, so deep-tail nodes underflow to zero
instead of producing 0 * inf.
"""
from __future__ import annotations

import math
import numpy as np

from .errors import DecayClassError, DomainError
from .model import ModelParams, Point, SampledFunction
from .numerics import (
    DEFAULT_SPEC,
    IntegralResult,
    QuadratureSpec,
    integrate_box,
    integrate_real_line,
    integrate_semiinf_singular,
    log_gamma,
)

KERNEL_KINDS = ("R", "Rstar", "K", "Rtilde", "Rhat", "LambdaGL", "LambdaBC", "QGL", "QBC")


def _coords(at):
    if isinstance(at, Point):
        return tuple(np.asarray(c, dtype=float) for c in at.coords), True
    arrs = np.broadcast_arrays(*[np.asarray(c, dtype=float) for c in at])
    return tuple(arrs), all(a.ndim == 0 for a in arrs)


def _result(value, err, evals, scalar):
    value = np.asarray(value)
    err = np.asarray(err, dtype=float)
    if scalar:
        return IntegralResult(complex(value.reshape(-1)[0]), float(err.reshape(-1)[0]), evals)
    return IntegralResult(value, err, evals)


def _inner_spec(spec: QuadratureSpec) -> QuadratureSpec:
    # inner factors carry their scale separately, so a purely relative target is meaningful
    return QuadratureSpec(rel_tol=min(spec.rel_tol * 0.1, 1e-10), abs_tol=0.0,
                          max_refinement_depth=max(spec.max_refinement_depth, 12),
                          truncation_margin=spec.truncation_margin)


def log_prefactor(lam: complex, params: ModelParams) -> complex:
    """log of (2 beta)^(i lam) / Gamma(g - i lam)."""
    return 1j * lam * math.log(2.0 * params.beta) - log_gamma(params.g - 1j * lam)


def log_boundary_weight(lam, params: ModelParams, d):
    """log of (1 + b e^-z)^(-i lam - g) (1 - b e^-z)^(-i lam + g - 1) at z = ln(beta) + d."""
    d = np.asarray(d, dtype=float)
    q = np.exp(-d)
    return (-1j * lam - params.g) * np.log1p(q) + (-1j * lam + params.g - 1.0) * np.log(-np.expm1(-d))


def _check_z1_domain(lam, params):
    if not np.imag(lam) > -params.g:
        raise DomainError(f"Im lambda = {np.imag(lam)} must exceed -g = {-params.g}")


# ---------------------------------------------------------------------------
# factorized z-integrals

# Elements of one batch share a node window, so a large batch with spread-out
# peaks costs (union window) x (batch) memory.  Large batches are sorted by
# peak position and split into contiguous pieces.
BATCH_LIMIT = 4096


def _split_sorted(fn, key, arrays):
    order = np.argsort(key, kind="stable")
    size = key.size
    scaled = np.empty(size, dtype=complex)
    logs = np.empty(size, dtype=complex)
    rel = 0.0
    for i in range(0, size, BATCH_LIMIT):
        idx = order[i:i + BATCH_LIMIT]
        s, l, e = fn(*[a[idx] for a in arrays])
        scaled[idx] = np.ravel(s)
        logs[idx] = np.ravel(l)
        rel = max(rel, e)
    return scaled, logs, rel


def z1_integral(lam: complex, params: ModelParams, t, spec: QuadratureSpec = DEFAULT_SPEC,
                weight: str = "full"):
    """int_{ln beta}^inf exp(-2 i lam z - e^{z - t}) w(z) dz for an array of t.

    Returns (scaled, log_scale, rel_err) with value = exp(log_scale) * scaled.
    ``weight="limit"`` replaces w by its beta -> 0 limit exp(-2 alpha e^-z)
    integrated over the whole line.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    shape = t.shape
    tf = t.reshape(-1)
    if tf.size > BATCH_LIMIT:
        sc, lg, rel = _split_sorted(lambda tt: z1_integral(lam, params, tt, spec, weight), tf, [tf])
        return sc.reshape(shape), lg.reshape(shape), rel
    if weight == "limit":
        a = np.exp(-tf)
        scaled, log_scale, err = zj_integral(lam, a, np.full_like(a, 2.0 * params.alpha), spec)
        return scaled.reshape(shape), log_scale.reshape(shape), err
    _check_z1_domain(lam, params)
    lb = params.log_beta
    s = np.exp(lb - tf)            # beta e^{-t}

    def f(d):
        d = np.asarray(d)[:, None]
        with np.errstate(over="ignore", under="ignore"):
            expo = -2j * lam * d - s[None, :] * np.expm1(d) + log_boundary_weight(lam, params, d)
            return np.exp(expo)

    res = integrate_semiinf_singular(f, 0.0, float(np.imag(lam) + params.g - 1.0), spec, offset=True,
                                     hint=(-3.0, max(1.0, float(np.log(np.log(1.0 / s.min() + 1.0) + 1.0) + 1.0))))
    scaled = np.atleast_1d(res.value)
    log_scale = -2j * lam * lb - s
    rel = float(np.max(np.atleast_1d(res.error_estimate) / np.maximum(np.abs(scaled), 1e-300)))
    return scaled.reshape(shape), log_scale.reshape(shape), rel


def zj_integral(lam: complex, a, b, spec: QuadratureSpec = DEFAULT_SPEC):
    """int exp(-2 i lam z - a e^z - b e^-z) dz for arrays a, b > 0 (or a = 0).

    Returns (scaled, log_scale, rel_err).  For a = 0 the integral is
    b^(-2 i lam) * int exp(-2 i lam u - e^-u) du, which needs Im lam < 0.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    shape = a.shape
    af, bf = a.reshape(-1), b.reshape(-1)
    if af.size > BATCH_LIMIT:
        with np.errstate(divide="ignore"):
            key = np.log(af) + np.log(bf)
        sc, lg, rel = _split_sorted(lambda aa, bb: zj_integral(lam, aa, bb, spec), key, [af, bf])
        return sc.reshape(shape), lg.reshape(shape), rel
    if np.all(af == 0):
        c0 = half_line_constant(lam, spec)
        log_scale = -2j * lam * np.log(bf)
        return np.full(shape, c0.value, dtype=complex), log_scale.reshape(shape), \
            float(c0.error_estimate / max(abs(c0.value), 1e-300))
    c = 2.0 * np.sqrt(af * bf)
    # keep the hint wide enough for small c where the integrand spreads out
    width = float(np.log(2.0 / max(c.min(), 1e-300)) + 3.0) if c.min() < 1 else 3.0

    def f(u):
        u = np.asarray(u)[:, None]
        with np.errstate(over="ignore", under="ignore"):
            return np.exp(-2j * lam * u - 2.0 * c[None, :] * np.sinh(0.5 * u) ** 2)

    res = integrate_real_line(f, spec, (-min(width, 40.0), min(width, 40.0)))
    scaled = np.atleast_1d(res.value)
    log_scale = -1j * lam * (np.log(bf) - np.log(af)) - c
    rel = float(np.max(np.atleast_1d(res.error_estimate) / np.maximum(np.abs(scaled), 1e-300)))
    return scaled.reshape(shape), log_scale.reshape(shape), rel


def half_line_constant(lam: complex, spec: QuadratureSpec = DEFAULT_SPEC) -> IntegralResult:
    """int exp(-2 i lam u - e^-u) du over the real line (Im lam < 0)."""
    if not np.imag(lam) < 0:
        raise DomainError("the last Baxter z-integral needs Im lambda < 0")
    return integrate_real_line(lambda u: np.exp(-2j * lam * u - np.exp(-u)), spec, (-3.0, 3.0))


# ---------------------------------------------------------------------------
# raising and Baxter operators, BC type


def _bc_kernel_product(lam, params, xs, ys, last_a_zero, spec, z1_weight="full"):
    """prod_j Z_j for the BC kernels given x (n arrays) and y (m arrays).

    m = n - 1 for the raising operator, m = n for the Baxter operator.
    Returns (product, rel_err).
    """
    n, m = len(xs), len(ys)
    ex = [np.exp(-x) for x in xs]
    if m:
        t = -np.log(ex[0] + np.exp(-ys[0]))
    else:
        t = xs[0] * np.ones(1)
    scaled, logs, err = z1_integral(lam, params, t, spec, z1_weight)
    prod = scaled
    total_log = logs
    errs = err
    for j in range(1, n):
        a = ex[j] + (np.exp(-ys[j]) if j < m else 0.0)
        b = np.exp(xs[j - 1]) + np.exp(ys[j - 1])
        s, l, e = zj_integral(lam, a, b, spec)
        prod = prod * s
        total_log = total_log + l
        errs += e
    if last_a_zero:
        b = np.exp(xs[n - 1]) + np.exp(ys[n - 1])
        s, l, e = zj_integral(lam, np.zeros_like(b), b, spec)
        prod = prod * s
        total_log = total_log + l
        errs += e
    with np.errstate(under="ignore"):
        return prod * np.exp(total_log), errs


def _y_hints(xs, count):
    lo = float(min(np.min(x) for x in xs)) - 3.0
    hi = float(max(np.max(x) for x in xs)) + 3.0
    return [(lo, hi)] * count


def _integrate_y(integrand, m, xs, spec):
    if m == 1:
        return integrate_real_line(lambda y: integrand(np.asarray(y)[:, None]), spec, _y_hints(xs, 1)[0])
    return integrate_box(lambda *ys: integrand(*[y[..., None] for y in ys]), m, spec, _y_hints(xs, m))


def apply_Lambda_bc(lam: complex, params: ModelParams, phi: SampledFunction | None, at,
                    spec: QuadratureSpec = DEFAULT_SPEC, z1_weight: str = "full") -> IntegralResult:
    """Raising operator Lambda_n(lam) applied to phi (arity n - 1) at n-point(s).

    ``phi=None`` stands for the constant 1 when n = 1.
    """
    _check_z1_domain(lam, params)
    xs, scalar = _coords(at)
    n = len(xs)
    if n > 3:
        raise DomainError("raising operator supported for n <= 3")
    if n > 1 and (phi is None or phi.arity != n - 1):
        raise ValueError("phi must have arity n - 1")
    shape = xs[0].shape
    xf = [x.reshape(-1) for x in xs]
    logp = log_prefactor(lam, params) + 1j * lam * sum(xf)
    ispec = _inner_spec(spec)
    if n == 1:
        z, rel = _bc_kernel_product(lam, params, xf, [], False, ispec, z1_weight)
        if phi is not None:
            raise ValueError("the one-particle raising operator acts on the constant 1 (phi=None)")
        val = np.exp(logp) * z
        return _result(val.reshape(shape), (rel * np.abs(val)).reshape(shape), 0, scalar)

    m = n - 1

    def integrand(*ys):
        ys_b = [np.broadcast_to(y, np.broadcast_shapes(y.shape, (1,) * (y.ndim - 1) + (len(xf[0]),))) for y in ys]
        xs_b = [np.broadcast_to(x, ys_b[0].shape) for x in xf]
        z, _ = _bc_kernel_product(lam, params, [x.reshape(-1) for x in xs_b], [y.reshape(-1) for y in ys_b],
                                  False, ispec, z1_weight)
        z = z.reshape(ys_b[0].shape)
        return np.exp(1j * lam * sum(ys_b)) * phi(*ys_b) * z

    res = _integrate_y(integrand, m, xf, spec)
    val = np.exp(logp) * res.value
    err = np.abs(np.exp(logp)) * res.error_estimate + 10 * ispec.rel_tol * np.abs(val)
    return _result(val.reshape(shape), np.asarray(err).reshape(shape), res.evaluations, scalar)


def apply_Q_bc(lam: complex, params: ModelParams, phi: SampledFunction, at,
               spec: QuadratureSpec = DEFAULT_SPEC) -> IntegralResult:
    """Baxter operator Q_n(lam) of the BC chain applied to phi (arity n)."""
    if not -params.g < np.imag(lam) < 0:
        raise DomainError(f"Im lambda = {np.imag(lam)} must lie in (-g, 0) = ({-params.g}, 0)")
    if phi.decay_class != "poly_at_plus_infinity":
        raise DecayClassError("the Baxter operator needs a function tagged poly_at_plus_infinity")
    xs, scalar = _coords(at)
    n = len(xs)
    if phi.arity != n or n > 2:
        raise ValueError("phi arity must equal the number of coordinates (n <= 2)")
    shape = xs[0].shape
    xf = [x.reshape(-1) for x in xs]
    logp = log_prefactor(lam, params) + 1j * lam * sum(xf)
    ispec = _inner_spec(spec)

    def integrand(*ys):
        ys_b = [np.broadcast_to(y, np.broadcast_shapes(y.shape, (1,) * (y.ndim - 1) + (len(xf[0]),))) for y in ys]
        xs_b = [np.broadcast_to(x, ys_b[0].shape) for x in xf]
        z, _ = _bc_kernel_product(lam, params, [x.reshape(-1) for x in xs_b], [y.reshape(-1) for y in ys_b],
                                  True, ispec)
        z = z.reshape(ys_b[0].shape)
        return np.exp(1j * lam * sum(ys_b)) * phi(*ys_b) * z

    res = _integrate_y(integrand, n, xf, spec)
    val = np.exp(logp) * res.value
    err = np.abs(np.exp(logp)) * res.error_estimate + 10 * ispec.rel_tol * np.abs(val)
    return _result(val.reshape(shape), np.asarray(err).reshape(shape), res.evaluations, scalar)


def baxter_eigenvalue_bc(lam: complex, spectral, params: ModelParams) -> complex:
    """(2 beta)^(-i lam) Gamma(2 i lam) / Gamma(g + i lam) prod_j Gamma(i lam - i l_j) Gamma(i lam + i l_j)."""
    out = -1j * lam * math.log(2.0 * params.beta) + log_gamma(2j * lam) - log_gamma(params.g + 1j * lam)
    for lj in spectral:
        out += log_gamma(1j * lam - 1j * lj) + log_gamma(1j * lam + 1j * lj)
    return complex(np.exp(out))


def baxter_eigenvalue_gl(lam: complex, spectral) -> complex:
    return complex(np.exp(sum(log_gamma(1j * lam - 1j * lj) for lj in spectral)))


# ---------------------------------------------------------------------------
# GL type


def apply_Lambda_gl(lam: complex, phi: SampledFunction | None, at,
                    spec: QuadratureSpec = DEFAULT_SPEC) -> IntegralResult:
    """Raising operator of the open GL chain: phi of n - 1 variables to n variables."""
    xs, scalar = _coords(at)
    n = len(xs)
    shape = xs[0].shape
    xf = [x.reshape(-1) for x in xs]
    plane = np.exp(1j * lam * sum(xf))
    if n == 1:
        val = plane * (1.0 if phi is None else phi())
        return _result(val.reshape(shape), np.zeros(shape), 0, scalar)

    def integrand(*ys):
        expo = -1j * lam * sum(ys)
        for j, y in enumerate(ys):
            expo = expo - np.exp(xf[j] - y) - np.exp(y - xf[j + 1])
        ys_b = np.broadcast_arrays(*ys, expo)[:-1]
        return np.exp(expo) * phi(*ys_b)

    res = _integrate_y(integrand, n - 1, xf, spec)
    val = plane * res.value
    return _result(val.reshape(shape), (np.abs(plane) * res.error_estimate).reshape(shape), res.evaluations, scalar)


def apply_Q_gl(lam: complex, phi: SampledFunction, at, spec: QuadratureSpec = DEFAULT_SPEC) -> IntegralResult:
    """Baxter operator of the open GL chain."""
    if np.imag(lam) > 0:
        raise DomainError("GL Baxter operator needs Im lambda <= 0")
    xs, scalar = _coords(at)
    n = len(xs)
    shape = xs[0].shape
    xf = [x.reshape(-1) for x in xs]
    plane = np.exp(1j * lam * sum(xf))

    def integrand(*ys):
        expo = -1j * lam * sum(ys)
        for j, y in enumerate(ys):
            expo = expo - np.exp(xf[j] - y)
            if j + 1 < n:
                expo = expo - np.exp(y - xf[j + 1])
        ys_b = np.broadcast_arrays(*ys, expo)[:-1]
        return np.exp(expo) * phi(*ys_b)

    res = _integrate_y(integrand, n, xf, spec)
    val = plane * res.value
    return _result(val.reshape(shape), (np.abs(plane) * res.error_estimate).reshape(shape), res.evaluations, scalar)


# ---------------------------------------------------------------------------
# two-site R operators and the reflection operator


def r_kernel(v, x1, x2, y):
    return np.exp(1j * v * (x1 - y) - np.exp(x1 - y) - np.exp(y - x2))


def apply_R(v: complex, phi: SampledFunction, at, spec: QuadratureSpec = DEFAULT_SPEC) -> IntegralResult:
    """[R(v) phi](x1, x2) = int exp(i v (x1 - y) - e^(x1 - y) - e^(y - x2)) phi(y, x1) dy."""
    (x1, x2), scalar = _coords(at)
    shape = x1.shape
    x1f, x2f = x1.reshape(-1), x2.reshape(-1)

    def f(y):
        y = np.asarray(y)[:, None]
        return r_kernel(v, x1f, x2f, y) * phi(y, x1f[None, :])

    res = integrate_real_line(f, spec, _y_hints([x1f, x2f], 1)[0])
    return _result(np.reshape(res.value, shape), np.reshape(res.error_estimate, shape), res.evaluations, scalar)


def apply_Rstar(v: complex, phi: SampledFunction, at, spec: QuadratureSpec = DEFAULT_SPEC) -> IntegralResult:
    """[R*(v) phi](x1, x2) = int exp(i v (y - x1) - e^(y - x1) - e^(-y - x2)) phi(y, -x1) dy."""
    (x1, x2), scalar = _coords(at)
    shape = x1.shape
    x1f, x2f = x1.reshape(-1), x2.reshape(-1)

    def f(y):
        y = np.asarray(y)[:, None]
        return np.exp(1j * v * (y - x1f) - np.exp(y - x1f) - np.exp(-y - x2f)) * phi(y, -x1f[None, :])

    hint = (float(min(x1f.min(), -x2f.max())) - 3.0, float(max(x1f.max(), -x2f.min())) + 3.0)
    res = integrate_real_line(f, spec, hint)
    return _result(np.reshape(res.value, shape), np.reshape(res.error_estimate, shape), res.evaluations, scalar)


def apply_K(v: complex, params: ModelParams, phi: SampledFunction, at,
            spec: QuadratureSpec = DEFAULT_SPEC) -> IntegralResult:
    """Reflection operator: prefactor times int_{ln beta}^inf exp(-2 i v y - e^(y - x)) w_v(y) phi(-y) dy."""
    _check_z1_domain(v, params)
    (x,), scalar = _coords(at if not np.isscalar(at) else (at,))
    shape = x.shape
    xf = x.reshape(-1)
    lb = params.log_beta
    s = np.exp(lb - xf)

    def f(d):
        d = np.asarray(d)[:, None]
        with np.errstate(over="ignore", under="ignore"):
            expo = -2j * v * d - s[None, :] * np.expm1(d) + log_boundary_weight(v, params, d)
            return np.exp(expo) * phi(-(lb + d) * np.ones_like(s)[None, :])

    res = integrate_semiinf_singular(f, 0.0, float(np.imag(v) + params.g - 1.0), spec, offset=True)
    logp = log_prefactor(v, params) - 2j * v * lb - s
    with np.errstate(under="ignore"):
        scale = np.exp(logp)
    val = scale * res.value
    return _result(val.reshape(shape), (np.abs(scale) * res.error_estimate).reshape(shape), res.evaluations, scalar)


def k_kernel_log(v, params: ModelParams, x, y):
    """log of exp(-2 i v y - e^(y - x)) w_v(y) for y > ln beta (prefactor omitted)."""
    y = np.asarray(y, dtype=float)
    return -2j * v * y - np.exp(y - x) + log_boundary_weight(v, params, y - params.log_beta)


def apply_Rtilde(v: complex, phi: SampledFunction, at, spec: QuadratureSpec = DEFAULT_SPEC) -> IntegralResult:
    """Gamma-normalized DST intertwiner:

    1/Gamma(i v) int_{-inf}^{x2} exp(i v (x1 - y) - e^(x1 - y) + e^(x1 - x2)) (1 - e^(y - x2))^(i v - 1) phi(y, x1) dy.
    """
    if not np.real(1j * v) > 0:
        raise DomainError("R-tilde needs Re(i v) > 0")
    (x1, x2), scalar = _coords(at)
    shape = x1.shape
    x1f, x2f = x1.reshape(-1), x2.reshape(-1)
    q = np.exp(x1f - x2f)

    def f(d):
        d = np.asarray(d)[:, None]
        with np.errstate(over="ignore", under="ignore"):
            expo = 1j * v * (x1f - x2f + d) - q * np.expm1(d) + (1j * v - 1.0) * np.log(-np.expm1(-d))
            return np.exp(expo) * phi(x2f - d, x1f * np.ones_like(d))

    res = integrate_semiinf_singular(f, 0.0, float(np.real(1j * v) - 1.0), spec, offset=True)
    norm = np.exp(-log_gamma(1j * v))
    val = norm * np.atleast_1d(res.value)
    err = abs(norm) * np.atleast_1d(res.error_estimate)
    return _result(val.reshape(shape), err.reshape(shape), res.evaluations, scalar)


def apply_Rhat(v: complex, phi: SampledFunction, at, spec: QuadratureSpec = DEFAULT_SPEC) -> IntegralResult:
    """DST / transposed-DST intertwiner:

    int dy2 int_{y2}^inf dy1 exp(i v (y2 - y1) - e^(-x1 - y2) - e^(y1 - x2)) (1 - e^(y2 - y1))^(-i v - 1) phi(-y1, y2).

    The endpoint y1 = y2 is integrable only for Im v > 0.
    """
    if not np.imag(v) > 0:
        raise DomainError("R-hat needs Im v > 0 for an integrable endpoint")
    (x1, x2), scalar = _coords(at)
    shape = x1.shape
    x1f, x2f = x1.reshape(-1), x2.reshape(-1)
    ispec = _inner_spec(spec)

    def outer(y2):
        y2 = np.asarray(y2)[:, None] * np.ones((1, len(x1f)))
        y2f = y2.reshape(-1)
        x2b = np.broadcast_to(x2f, y2.shape).reshape(-1)
        s = np.exp(y2f - x2b)

        def inner(d):
            d = np.asarray(d)[:, None]
            with np.errstate(over="ignore", under="ignore"):
                expo = -1j * v * d - s * np.expm1(d) + (-1j * v - 1.0) * np.log(-np.expm1(-d))
                return np.exp(expo) * phi(-(y2f + d), y2f * np.ones_like(d))

        r = integrate_semiinf_singular(inner, 0.0, float(np.imag(v) - 1.0), ispec, offset=True)
        inner_val = np.atleast_1d(r.value).reshape(y2.shape)
        with np.errstate(under="ignore"):
            return np.exp(-np.exp(-x1f - y2) - s.reshape(y2.shape)) * inner_val

    hint = (float(-x1f.max()) - 3.0, float(x2f.max()) + 3.0)
    res = integrate_real_line(outer, spec, hint)
    val = np.atleast_1d(res.value)
    err = np.atleast_1d(res.error_estimate) + 10 * ispec.rel_tol * np.abs(val)
    return _result(val.reshape(shape), err.reshape(shape), res.evaluations, scalar)


# ---------------------------------------------------------------------------
# finite-difference residuals of the kernel differential equations


def _d1(fn, t, h):
    """4th-order central first derivative."""
    return (fn(t - 2 * h) - 8 * fn(t - h) + 8 * fn(t + h) - fn(t + 2 * h)) / (12 * h)


def kernel_pde_residual_K(v, params: ModelParams, x, y, h: float = 1e-3):
    """Relative residuals of d_x K = e^(y-x) K and
    d_y K = (1 - e^(y-x) + (2 alpha e^-y - 1 - 2 i v)/(1 - beta^2 e^-2y)) K."""
    if not np.all(np.asarray(y) > params.log_beta + 2 * h):
        raise DomainError("y must exceed ln beta by at least 2h")
    k = np.exp(k_kernel_log(v, params, x, y))
    dkx = _d1(lambda t: np.exp(k_kernel_log(v, params, t, y)), x, h)
    dky = _d1(lambda t: np.exp(k_kernel_log(v, params, x, t)), y, h)
    ey = np.exp(-np.asarray(y))
    coef_y = 1.0 - np.exp(y - np.asarray(x)) + (2 * params.alpha * ey - 1.0 - 2j * v) / (1.0 - params.beta ** 2 * ey ** 2)
    res_x = (dkx - np.exp(y - np.asarray(x)) * k) / np.abs(k)
    res_y = (dky - coef_y * k) / np.abs(k)
    return res_x, res_y


def kernel_pde_residual_R(v, x1, x2, y, h: float = 1e-3):
    """Relative residuals of the three first-order equations of the R kernel:
    d_x1 r = (i v - e^(x1-y)) r, d_x2 r = e^(y-x2) r, d_y r = (-i v + e^(x1-y) - e^(y-x2)) r."""
    r = r_kernel(v, x1, x2, y)
    d_x1 = _d1(lambda t: r_kernel(v, t, x2, y), x1, h)
    d_x2 = _d1(lambda t: r_kernel(v, x1, t, y), x2, h)
    d_y = _d1(lambda t: r_kernel(v, x1, x2, t), y, h)
    a = np.abs(r)
    return np.stack([
        (d_x1 - (1j * v - np.exp(x1 - y)) * r) / a,
        (d_x2 - np.exp(y - x2) * r) / a,
        (d_y - (-1j * v + np.exp(x1 - y) - np.exp(y - x2)) * r) / a,
    ])
