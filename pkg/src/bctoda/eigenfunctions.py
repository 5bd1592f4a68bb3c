"""Eigenfunctions of the open Toda chains and independent one-particle routes.

BC eigenfunctions are built by the raising-operator recursion, the n - 1
particle function being cached on a Chebyshev box first.  The one-particle
function has two more routes that share no quadrature code with it: a
Whittaker function from Kummer series (summed in extended precision) and a
Mellin-Barnes contour integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np
from scipy.optimize import brentq
from scipy.special import digamma
from scipy.stats import qmc

from .errors import CacheAccuracyError, DegenerateMuError, DomainError, SizeLimitError
from .kernels import _bc_kernel_product, _inner_spec, apply_Lambda_bc, apply_Lambda_gl, log_prefactor
from .model import (
    ModelParams,
    Point,
    SampledFunction,
    SpectralTuple,
    PROBE_MAX_POINTS,
    build_cache,
    default_box_left,
)
from .numerics import DEFAULT_SPEC, IntegralResult, QuadratureSpec, integrate_real_line, log_gamma

CHUNK = 64
RIGHT_MARGIN = 8.0


def _as_coords(at):
    if isinstance(at, Point):
        return tuple(np.asarray(c, dtype=float) for c in at.coords), True
    arrs = np.broadcast_arrays(*[np.asarray(c, dtype=float) for c in at])
    return tuple(arrs), all(a.ndim == 0 for a in arrs)


def chunked(fn, coords, chunk: int = CHUNK):
    """Apply fn(*flat coords) -> IntegralResult in chunks; returns (values, errors)."""
    shape = coords[0].shape
    flat = [c.reshape(-1) for c in coords]
    vals = np.empty(flat[0].size, dtype=complex)
    errs = np.empty(flat[0].size)
    for i in range(0, flat[0].size, chunk):
        r = fn(*[c[i:i + chunk] for c in flat])
        vals[i:i + chunk] = np.atleast_1d(r.value)
        errs[i:i + chunk] = np.atleast_1d(r.error_estimate)
    return vals.reshape(shape), errs.reshape(shape)


def _finish(vals, errs, scalar):
    if scalar:
        return IntegralResult(complex(vals.reshape(-1)[0]), float(errs.reshape(-1)[0]), 0)
    return IntegralResult(vals, errs, 0)


# ---------------------------------------------------------------------------
# one particle


def psi1(lam: complex, params: ModelParams, x, spec: QuadratureSpec = DEFAULT_SPEC) -> IntegralResult:
    """One-particle BC eigenfunction from its boundary-weighted integral (vectorized in x)."""
    return apply_Lambda_bc(lam, params, None, (x,), spec)


def _kummer_m(kappa, mu, z):
    """M_{kappa,mu}(z) = e^{-z/2} z^{1/2+mu} sum_k (a)_k/(b)_k z^k/k! in the current mpmath precision."""
    a = mpmath.mpf(0.5) + mu - kappa
    b = 1 + 2 * mu
    term = mpmath.mpf(1)
    total = term
    k = 0
    tiny = mpmath.mpf(10) ** (-mpmath.mp.dps)
    peak = abs(term)
    while True:
        term = term * (a + k) / (b + k) * z / (k + 1)
        total += term
        k += 1
        peak = max(peak, abs(term))
        if abs(term) < tiny * peak and k > abs(z):
            break
        if k > 100000:
            raise RuntimeError("Kummer series did not converge")
    return mpmath.exp(-z / 2) * mpmath.power(z, mpmath.mpf(0.5) + mu) * total


def whittaker_oracle(kappa: float, mu: complex, z: float) -> complex:
    """W_{kappa,mu}(z) from the connection formula over two ascending Kummer series.

    The two series cancel to a relative size e^{-z}, so the working precision
    grows with z.
    """
    mu = complex(mu)
    two_mu = 2 * mu
    if abs(two_mu - round(two_mu.real)) < 1e-8:
        raise DegenerateMuError(f"2 mu = {two_mu} is too close to an integer")
    if not z > 0:
        raise DomainError("whittaker_oracle needs z > 0")
    with mpmath.workdps(30 + int(z / math.log(10)) + 10):
        zz = mpmath.mpf(z)
        kk = mpmath.mpf(kappa)
        m = mpmath.mpc(mu.real, mu.imag)
        half = mpmath.mpf(0.5)
        w = (mpmath.gamma(-2 * m) / mpmath.gamma(half - m - kk) * _kummer_m(kk, m, zz)
             + mpmath.gamma(2 * m) / mpmath.gamma(half + m - kk) * _kummer_m(kk, -m, zz))
        return complex(w)


def psi_whittaker(lam: float, params: ModelParams, x: float) -> complex:
    """One-particle eigenfunction as e^{x/2}/sqrt(2 beta) W_{-alpha/beta, -i lam}(2 beta e^{-x})."""
    z = 2.0 * params.beta * math.exp(-x)
    return math.exp(x / 2) / math.sqrt(2 * params.beta) * whittaker_oracle(-params.alpha / params.beta, -1j * lam, z)


def mb_contour_offset(params: ModelParams, x=None):
    """Depth of the horizontal contour below the real axis.

    All poles lie on or above the real axis, so the line may be lowered
    freely.  Without x the minimal offset is returned; with x it is lowered
    to the real saddle of the integrand, which removes the cancellation that
    otherwise costs accuracy when beta*exp(-x) is large.
    """
    delta = min(params.g, 1.0) / 4.0
    if x is None:
        return delta
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    l2b = math.log(2 * params.beta)
    out = np.full(xs.shape, delta)
    for i, xv in enumerate(xs):
        def slope(s):
            return 2 * digamma(s) - digamma(s + params.g) + xv - l2b
        if slope(delta) < 0:
            hi = 2 * delta
            while slope(hi) < 0:
                hi *= 2
            out[i] = brentq(slope, delta, hi)
    return out


def psi_mb1(lam: float, params: ModelParams, x, spec: QuadratureSpec = DEFAULT_SPEC) -> IntegralResult:
    """One-particle eigenfunction from its Mellin-Barnes integral on a horizontal line below the poles."""
    if np.imag(lam) != 0 or lam == 0:
        raise DomainError("psi_mb1 needs real nonzero lambda")
    lam = float(np.real(lam))
    x_arr = np.asarray(x, dtype=float)
    xf = np.atleast_1d(x_arr).reshape(-1)
    delta = mb_contour_offset(params, xf)[None, :]
    l2b = math.log(2 * params.beta)
    g = params.g

    def f(t):
        gam = np.asarray(t)[:, None] - 1j * delta
        base = (-1j * gam * l2b + log_gamma(1j * gam - 1j * lam) + log_gamma(1j * gam + 1j * lam)
                - log_gamma(g + 1j * gam))
        return np.exp(base + 1j * gam * xf[None, :]) / (2 * np.pi)

    res = integrate_real_line(f, spec, (-10.0, 10.0))
    front = np.exp(params.beta * np.exp(-xf))
    val = front * np.atleast_1d(res.value)
    err = front * np.atleast_1d(res.error_estimate)
    if x_arr.ndim == 0:
        return IntegralResult(complex(val[0]), float(err[0]), res.evaluations)
    return IntegralResult(val.reshape(x_arr.shape), err.reshape(x_arr.shape), res.evaluations)


# ---------------------------------------------------------------------------
# n particles


@dataclass(frozen=True)
class EigenfunctionHandle:
    family: str
    params: ModelParams | None
    spectral: SpectralTuple
    backing: SampledFunction

    @property
    def n(self) -> int:
        return self.spectral.n

    def __call__(self, *coords):
        return self.backing(*coords)


def _check_real(spectral: SpectralTuple):
    if not spectral.is_real():
        raise DomainError("eigenfunctions need real spectral parameters")


def _adaptive_cache(f: SampledFunction, box, degrees: Sequence[int], threshold: float = 1e-7,
                    probe_points: int = PROBE_MAX_POINTS):
    last = None
    for deg in degrees:
        try:
            return build_cache(f, box, deg, rel_threshold=threshold, probe_points=probe_points)
        except CacheAccuracyError as exc:
            last = exc
    raise last


def default_box(params: ModelParams | None, n: int, lo_hint: float, hi_hint: float):
    """Per-axis caching box: left where beta e^{-x} = 40 (BC) and a fixed margin to the right."""
    left = default_box_left(params) if params is not None else lo_hint - RIGHT_MARGIN
    left = min(left, lo_hint - 1.0)
    return [(left, hi_hint + RIGHT_MARGIN)] * n


def psi_n(spectral: SpectralTuple, params: ModelParams, at, spec: QuadratureSpec = DEFAULT_SPEC,
          method: str = "deterministic", samples: int = 2 ** 12, seed: int = 0) -> IntegralResult:
    """BC eigenfunction by the raising-operator recursion (vectorized over points).

    n <= 2 is deterministic; n = 3 needs ``method="qmc"`` and is a loose
    quasi-Monte Carlo estimate of the last y-integrals.
    """
    _check_real(spectral)
    coords, scalar = _as_coords(at)
    n = spectral.n
    if len(coords) != n:
        raise ValueError("point dimension must equal the number of spectral parameters")
    lams = [l.real for l in spectral.lambdas]
    if n == 1:
        vals, errs = chunked(lambda x: psi1(lams[0], params, x, spec), coords, chunk=4096)
        return _finish(vals, errs, scalar)
    if n == 2:
        inner = bc_backing(SpectralTuple(lams[:1]), params, float(max(c.max() for c in coords)), spec)
        vals, errs = chunked(lambda *xs: apply_Lambda_bc(lams[1], params, inner, xs, spec), coords)
        return _finish(vals, errs, scalar)
    if n == 3:
        if method != "qmc":
            raise SizeLimitError("n = 3 needs method='qmc' (loose tolerance)")
        inner = bc_backing(SpectralTuple(lams[:2]), params, float(max(c.max() for c in coords)),
                           QuadratureSpec(rel_tol=1e-6, abs_tol=1e-9), threshold=1e-4)
        vals, errs = _qmc_lambda_bc(lams[2], params, inner, coords, samples, seed)
        return _finish(vals, errs, scalar)
    raise SizeLimitError("psi_n supports n <= 3")


def bc_backing(spectral: SpectralTuple, params: ModelParams, x_hi: float, spec: QuadratureSpec,
               threshold: float = 1e-7) -> SampledFunction:
    """Cached BC eigenfunction on a box covering what the next raising step integrates over."""
    n = spectral.n
    f = SampledFunction(n, lambda *xs: psi_n(spectral, params, xs, spec).value, "poly_at_plus_infinity")
    box = default_box(params, n, default_box_left(params), max(x_hi, 0.0))
    if n == 1:
        return _adaptive_cache(f, box, (64, 128, 256), threshold)
    # the n = 2 backing only feeds the loose n = 3 estimate: coarser grid, fewer probes
    return _adaptive_cache(f, box, (32, 48), threshold, probe_points=400)


def _qmc_lambda_bc(lam, params, inner: SampledFunction, coords, samples, seed):
    """Randomized Sobol estimate of the two outer y-integrals of the n = 3 raising operator."""
    box = inner.cache.box
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    vol = float(np.prod(hi - lo))
    ispec = _inner_spec(QuadratureSpec(rel_tol=1e-6, abs_tol=1e-9))
    flat = [c.reshape(-1) for c in coords]
    vals = np.empty(flat[0].size, dtype=complex)
    errs = np.empty(flat[0].size)
    for p in range(flat[0].size):
        xs = [np.array([c[p]]) for c in flat]
        estimates = []
        for rep in range(4):
            pts = qmc.Sobol(2, scramble=True, seed=seed + rep).random(samples)
            y = lo + pts * (hi - lo)
            ys = [y[:, 0], y[:, 1]]
            z, _ = _bc_kernel_product(lam, params, [np.broadcast_to(x, ys[0].shape) for x in xs], ys, False, ispec)
            integrand = np.exp(1j * lam * (ys[0] + ys[1])) * inner(*ys) * z
            estimates.append(vol * integrand.mean())
        est = np.mean(estimates)
        pref = np.exp(log_prefactor(lam, params) + 1j * lam * sum(x[0] for x in xs))
        vals[p] = pref * est
        errs[p] = abs(pref) * np.std(estimates, ddof=1) / 2.0
    return vals.reshape(coords[0].shape), errs.reshape(coords[0].shape)


def phi_n(spectral: SpectralTuple, at, spec: QuadratureSpec = DEFAULT_SPEC) -> IntegralResult:
    """GL eigenfunction by the raising-operator recursion, n <= 3."""
    _check_real(spectral)
    coords, scalar = _as_coords(at)
    n = spectral.n
    if len(coords) != n:
        raise ValueError("point dimension must equal the number of spectral parameters")
    if n > 3:
        raise SizeLimitError("phi_n supports n <= 3")
    lams = [l.real for l in spectral.lambdas]
    if n == 1:
        val = np.exp(1j * lams[0] * coords[0])
        return _finish(np.asarray(val), np.zeros(np.shape(val)), scalar)
    if n == 2:
        inner = SampledFunction(1, lambda y: np.exp(1j * lams[0] * y))
    else:
        lo = float(min(c.min() for c in coords))
        hi = float(max(c.max() for c in coords))
        f = SampledFunction(2, lambda *ys: phi_n(SpectralTuple(lams[:2]), ys, spec).value)
        inner = _adaptive_cache(f, [(lo - RIGHT_MARGIN, hi + RIGHT_MARGIN)] * 2, (48, 80), 1e-6)
    vals, errs = chunked(lambda *xs: apply_Lambda_gl(lams[-1], inner, xs, spec), coords)
    return _finish(vals, errs, scalar)


def build_eigen_handle(family: str, spectral: SpectralTuple, params: ModelParams | None, box,
                       spec: QuadratureSpec = DEFAULT_SPEC, degree: int | Sequence[int] | None = None,
                       threshold: float = 1e-7) -> EigenfunctionHandle:
    """Evaluate the eigenfunction on Chebyshev nodes of ``box`` and attach the interpolant."""
    family = family.upper()
    _check_real(spectral)
    if family == "BC":
        if params is None:
            raise ValueError("BC handles need ModelParams")
        f = SampledFunction(spectral.n, lambda *xs: psi_n(spectral, params, xs, spec).value, "poly_at_plus_infinity")
    elif family == "GL":
        f = SampledFunction(spectral.n, lambda *xs: phi_n(spectral, xs, spec).value, "exp_tempered")
    else:
        raise ValueError(f"unknown family {family!r}")
    degrees = [degree] if degree is not None else ((64, 128, 256) if spectral.n == 1 else (40, 64))
    backing = _adaptive_cache(f, box, degrees, threshold)
    return EigenfunctionHandle(family, params if family == "BC" else None, spectral, backing)


def decay_envelope(spectral: SpectralTuple, params: ModelParams, coords) -> np.ndarray:
    """The bound factor prod 1/|Gamma(g - i l_j)| exp(-beta e^{-x1} [x1 < ln beta] - sum e^{(x_j - x_{j+1})/2} [x_j > x_{j+1}])."""
    coords = [np.asarray(c, dtype=float) for c in coords]
    log_env = -sum(np.real(log_gamma(params.g - 1j * l)) for l in spectral.lambdas)
    x1 = coords[0]
    log_env = log_env - np.where(x1 < params.log_beta, params.beta * np.exp(-x1), 0.0)
    for a, b in zip(coords[:-1], coords[1:]):
        log_env = log_env - np.where(a > b, np.exp((a - b) / 2), 0.0)
    return np.exp(log_env)
