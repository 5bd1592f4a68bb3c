"""Complex log-gamma and double-exponential quadrature engines.

All integrators are built on the same primitive: a trapezoid sum in a
transformed variable on a window found by scanning outward from a decay
hint, refined by step halving until successive sums agree.  For integrands
that are analytic in a strip and decay at least exponentially this
converges geometrically, so the difference between the last two sums is a
safe (pessimistic) error estimate.

Integrands are vectorized callbacks: ``f(t)`` receives a 1-D array of
nodes and returns an array of shape ``(len(t),)`` or ``(len(t), *batch)``.
Batched integrands are integrated element-wise on a shared node set, with
windows and convergence judged per batch element.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import MaxDepthError, NonFiniteError, PoleError, SingularityTooStrongError

_EPS = np.finfo(float).eps

# Lanczos approximation, g = 7, 9 terms.
_LANCZOS_G = 7.0
_LANCZOS_P = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_log_gamma(z: np.ndarray) -> np.ndarray:
    # valid for Re z >= 1/2
    zm = z - 1.0
    acc = np.full_like(zm, _LANCZOS_P[0])
    for k in range(1, len(_LANCZOS_P)):
        acc = acc + _LANCZOS_P[k] / (zm + k)
    t = zm + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(acc)


def log_gamma(z):
    """Principal branch of log Gamma(z) for complex ``z`` (scalar or array).

    The branch is the analytic continuation from the positive real axis to
    the plane cut along (-inf, 0].  Raises PoleError at nonpositive integers.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    near_int = np.abs(z - np.round(z.real)) <= 1e-14
    if np.any(near_int & (np.round(z.real) <= 0)):
        raise PoleError(f"log_gamma pole at {z[near_int & (np.round(z.real) <= 0)][0]}")
    shift = np.where(z.real < 0.5, np.ceil(0.5 - z.real), 0.0).astype(int)
    out = _lanczos_log_gamma(z + shift)
    for k in range(int(shift.max()) if shift.size else 0):
        mask = shift > k
        out[mask] -= np.log(z[mask] + k)
    if not np.all(np.isfinite(out)):
        raise NonFiniteError("log_gamma overflow")
    return complex(out[0]) if scalar else out


def gamma(z):
    return np.exp(log_gamma(z))


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_refinement_depth: int = 12
    truncation_margin: float = 2.0

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.abs_tol < 0:
            raise ValueError("abs_tol must be nonnegative")
        if self.max_refinement_depth < 1:
            raise ValueError("max_refinement_depth must be >= 1")

    def tail_threshold(self, scale):
        """Integrand magnitude below which tails are dropped."""
        return np.maximum(self.abs_tol, self.rel_tol * scale) * 10.0 ** (-self.truncation_margin)


DEFAULT_SPEC = QuadratureSpec()
DEFAULT_SPEC_ND = QuadratureSpec(rel_tol=1e-7, abs_tol=1e-10)


@dataclass
class IntegralResult:
    value: complex | np.ndarray
    error_estimate: float | np.ndarray
    evaluations: int


def _batch_abs_max(vals: np.ndarray) -> np.ndarray:
    """max |vals| over the node axis -> shape batch."""
    return np.max(np.abs(vals), axis=0)


def _checked(vals, nodes):
    vals = np.asarray(vals)
    if vals.shape[:1] != nodes.shape:
        vals = np.broadcast_to(vals, nodes.shape + vals.shape[1:]) if vals.ndim <= 1 else vals
    if not np.all(np.isfinite(vals)):
        bad = nodes[~np.all(np.isfinite(vals).reshape(len(nodes), -1), axis=1)]
        raise NonFiniteError(f"integrand not finite at t = {bad[:3]}")
    return vals.astype(complex, copy=False)


def _find_window(g, lo, hi, spec: QuadratureSpec, step=0.25, chunk=8.0, limit=600.0):
    """Expand [lo, hi] until |g| is negligible beyond both edges.

    Negligible is judged per batch element against that element's running
    maximum, so windows stay meaningful for elements of very different size.
    Returns (lo, hi, evaluations).
    """
    nodes = np.arange(lo, hi + step / 2, step)
    vals = _checked(g(nodes), nodes)
    evals = len(nodes)
    mags = np.abs(vals).reshape(len(nodes), -1)
    peak = mags.max(axis=0)

    def significant(m, pk):
        # relative only: an absolute floor would stop the search when the
        # starting window misses the bulk of a small integrand
        cut = spec.rel_tol * pk * 10.0 ** (-spec.truncation_margin)
        return np.any(m > np.maximum(cut, 1e-300 * (pk > 0)), axis=1)

    left, right = nodes[0], nodes[-1]
    left_mags, right_mags = mags[: int(chunk / step)], mags[-int(chunk / step):]
    # right side
    while True:
        sig = significant(right_mags, peak)
        if not sig[-max(2, int(1.0 / step)):].any():
            break
        if right - hi > limit:
            raise MaxDepthError("integrand does not decay to the right")
        new = right + step * np.arange(1, int(chunk / step) + 1)
        nv = _checked(g(new), new)
        evals += len(new)
        right_mags = np.abs(nv).reshape(len(new), -1)
        peak = np.maximum(peak, right_mags.max(axis=0))
        right = new[-1]
    while True:
        sig = significant(left_mags, peak)
        if not sig[: max(2, int(1.0 / step))].any():
            break
        if lo - left > limit:
            raise MaxDepthError("integrand does not decay to the left")
        new = left - step * np.arange(int(chunk / step), 0, -1)
        nv = _checked(g(new), new)
        evals += len(new)
        left_mags = np.abs(nv).reshape(len(new), -1)
        peak = np.maximum(peak, left_mags.max(axis=0))
        left = new[0]
    # shrink to the significant part with a one-unit safety pad
    probe = np.arange(left, right + step / 2, step)
    pv = np.abs(_checked(g(probe), probe)).reshape(len(probe), -1)
    evals += len(probe)
    sig = significant(pv, np.maximum(peak, pv.max(axis=0)))
    if not sig.any():
        return lo, hi, evals
    idx = np.nonzero(sig)[0]
    return probe[max(idx[0] - 4, 0)] - 1.0, probe[min(idx[-1] + 4, len(probe) - 1)] + 1.0, evals


def _trapezoid(g, lo, hi, spec: QuadratureSpec, h0=0.25):
    """Step-halving trapezoid on [lo, hi]; g negligible at both ends."""
    n = max(int(math.ceil((hi - lo) / h0)), 4)
    h = (hi - lo) / n
    nodes = lo + h * np.arange(n + 1)
    vals = _checked(g(nodes), nodes)
    evals = len(nodes)
    weights = np.ones(n + 1)
    weights[0] = weights[-1] = 0.5
    total = h * np.tensordot(weights, vals, axes=(0, 0))
    abs_sum = h * np.tensordot(weights, np.abs(vals), axes=(0, 0))
    for depth in range(spec.max_refinement_depth):
        h /= 2.0
        mid = lo + h * (2 * np.arange(n) + 1)
        mv = _checked(g(mid), mid)
        evals += len(mid)
        n *= 2
        new_total = 0.5 * total + h * mv.sum(axis=0)
        abs_sum = 0.5 * abs_sum + h * np.abs(mv).sum(axis=0)
        err = np.abs(new_total - total)
        floor = 64.0 * _EPS * abs_sum
        target = np.maximum(np.maximum(spec.abs_tol, spec.rel_tol * np.abs(new_total)), floor)
        total = new_total
        if depth >= 1 and np.all(err <= target):
            return total, np.maximum(err, floor), evals
    raise MaxDepthError(
        f"trapezoid did not converge after {spec.max_refinement_depth} halvings "
        f"(max error {np.max(err):.3e}, target {np.min(target):.3e})"
    )


def _edge_tail(g, lo, hi, peak_scale):
    """Crude bound on the mass dropped outside [lo, hi]."""
    edge = np.array([lo, lo + 0.5, hi - 0.5, hi])
    m = np.abs(_checked(g(edge), edge)).reshape(4, -1)
    tail = 0.0
    for a, b in ((m[0], m[1]), (m[3], m[2])):
        with np.errstate(divide="ignore", invalid="ignore"):
            rate = np.where((a > 0) & (b > a), 2.0 * np.log(b / a), 1.0)
        tail = tail + a / np.maximum(rate, 0.05)
    return tail.reshape(np.shape(peak_scale)) if np.ndim(peak_scale) else float(tail[0])


def _integrate_transformed(g, hint, spec: QuadratureSpec):
    lo, hi = hint
    lo, hi, ev0 = _find_window(g, lo, hi, spec)
    total, err, ev1 = _trapezoid(g, lo, hi, spec)
    tail = _edge_tail(g, lo, hi, total)
    return IntegralResult(_unbox(total), _unbox(err + tail), ev0 + ev1 + 4)


def _unbox(a):
    a = np.asarray(a)
    return a.item() if a.ndim == 0 else a


def integrate_real_line(f: Callable, spec: QuadratureSpec = DEFAULT_SPEC,
                        hint: Sequence[float] = (-4.0, 4.0)) -> IntegralResult:
    """Integral of ``f`` over the real line.

    ``hint`` is an interval believed to hold the bulk of the integrand; the
    window is grown from it until both tails are negligible.
    """
    return _integrate_transformed(f, tuple(hint), spec)


def _log_cosh(w):
    # accurate for tiny w as well as large w
    small = w < 1.0
    out = np.empty_like(w)
    ws = w[small]
    out[small] = np.log1p(2.0 * np.sinh(0.5 * ws) ** 2)
    wl = w[~small]
    out[~small] = wl + np.log1p(np.exp(-2.0 * wl)) - math.log(2.0)
    return out


def integrate_semiinf_singular(f: Callable, left_endpoint: float, sing_exponent: float,
                               spec: QuadratureSpec = DEFAULT_SPEC, *, offset: bool = False,
                               hint: Sequence[float] = (-3.0, 3.0)) -> IntegralResult:
    """Integral of ``f`` over (left_endpoint, inf) with an algebraic endpoint singularity.

    The map z = left + log cosh(w) followed by w = exp(s - exp(-s)) turns
    the (z - left)**sing_exponent endpoint into a double-exponentially
    decaying tail in s.  With ``offset=True`` the callback receives
    d = z - left (computed without cancellation) instead of z.
    """
    if sing_exponent <= -1.0:
        raise SingularityTooStrongError(f"sing_exponent {sing_exponent} <= -1")

    def g(s):
        s = np.asarray(s, dtype=float)
        w = np.exp(s - np.exp(-np.clip(s, -7.0, None)))
        d = _log_cosh(w)
        jac = np.tanh(w) * w * (1.0 + np.exp(-np.clip(s, -7.0, None)))
        keep = (d > 0) & (jac > 0) & (s > -6.9)
        out = None
        if keep.any():
            arg = d[keep] if offset else left_endpoint + d[keep]
            fv = np.asarray(f(arg))
            fv = fv * jac[keep].reshape((-1,) + (1,) * (fv.ndim - 1))
            out = np.zeros((len(s),) + fv.shape[1:], dtype=complex)
            out[keep] = fv
        else:
            probe = np.asarray(f(np.array([1.0]) if offset else np.array([left_endpoint + 1.0])))
            out = np.zeros((len(s),) + probe.shape[1:], dtype=complex)
        return out

    return _integrate_transformed(g, tuple(hint), spec)


def integrate_box(f: Callable, k: int, spec: QuadratureSpec = DEFAULT_SPEC_ND,
                  hints: Sequence[Sequence[float]] | None = None) -> IntegralResult:
    """Iterated integral of ``f(t_1, ..., t_k)`` over R^k, k <= 3.

    The innermost axis is the last argument.  ``f`` must broadcast over its
    arguments.  Errors accumulate by the triangle inequality.
    """
    if not 1 <= k <= 3:
        raise ValueError("integrate_box supports 1 <= k <= 3")
    hints = list(hints) if hints is not None else [(-4.0, 4.0)] * k
    inner_err = [0.0]
    evals = [0]

    def level(prefix: tuple, axis: int):
        def g(t):
            t = np.asarray(t, dtype=float)
            if axis == k - 1:
                # reshape prefix arrays so t varies along a new leading axis
                args = [np.asarray(p)[None, ...] for p in prefix] + [
                    t.reshape((-1,) + (1,) * (np.ndim(prefix[0]) if prefix else 0))]
                return np.asarray(f(*args)) * np.ones(1)
            newprefix = tuple(np.asarray(p)[None, ...] * np.ones((len(t),) + (1,) * np.ndim(p))
                              for p in prefix) + (
                t.reshape((-1,) + (1,) * (np.ndim(prefix[0]) if prefix else 0))
                * np.ones((1,) + (np.shape(prefix[0]) if prefix else ())),)
            res = integrate_real_line(level(newprefix, axis + 1), spec, hints[axis + 1])
            inner_err[0] = max(inner_err[0], float(np.max(res.error_estimate)))
            evals[0] += res.evaluations
            return res.value
        return g

    res = integrate_real_line(level((), 0), spec, hints[0])
    width = sum(abs(b - a) + 16.0 for a, b in hints[1:]) if k > 1 else 0.0
    return IntegralResult(res.value, float(np.max(res.error_estimate)) + inner_err[0] * max(width, 1.0),
                          res.evaluations + evals[0])
