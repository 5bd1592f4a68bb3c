"""Boundary parameters, spectral data and sampled functions with Chebyshev caches."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.fft import dct

from .errors import BLimitUnsupportedError, CacheAccuracyError, InvalidParamsError

DECAY_CLASSES = ("exp_tempered", "poly_at_plus_infinity")


@dataclass(frozen=True)
class ModelParams:
    alpha: float
    beta: float

    @property
    def g(self) -> float:
        return 0.5 + self.alpha / self.beta

    @property
    def log_beta(self) -> float:
        return math.log(self.beta)


def make_params(alpha: float, beta: float) -> ModelParams:
    alpha, beta = float(alpha), float(beta)
    if not (math.isfinite(alpha) and math.isfinite(beta)):
        raise InvalidParamsError("alpha and beta must be finite")
    if beta == 0.0:
        raise BLimitUnsupportedError("beta = 0 is a limit; use the beta-limit check instead")
    if beta < 0:
        raise InvalidParamsError(f"beta must be positive, got {beta}")
    p = ModelParams(alpha, beta)
    if not p.g > 0:
        raise InvalidParamsError(f"g = 1/2 + alpha/beta = {p.g} must be positive")
    return p


@dataclass(frozen=True)
class SpectralTuple:
    lambdas: tuple

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(complex(l) for l in self.lambdas))
        if len(self.lambdas) < 1:
            raise ValueError("SpectralTuple needs at least one entry")

    @property
    def n(self) -> int:
        return len(self.lambdas)

    def is_real(self) -> bool:
        return all(l.imag == 0 for l in self.lambdas)


@dataclass(frozen=True)
class Point:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))
        if not all(math.isfinite(c) for c in self.coords):
            raise ValueError("Point coordinates must be finite")

    @property
    def n(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class ChebCache:
    box: tuple            # ((lo, hi), ...) per axis
    coefficients: np.ndarray
    probe_error: float    # max abs error on the probe grid
    scale: float          # max |f| seen on the box

    def __call__(self, *coords):
        t = [(2.0 * np.asarray(c, dtype=float) - (lo + hi)) / (hi - lo) for c, (lo, hi) in zip(coords, self.box)]
        if len(t) == 1:
            return C.chebval(t[0], self.coefficients)
        if len(t) == 2:
            return C.chebval2d(t[0], t[1], self.coefficients)
        return C.chebval3d(t[0], t[1], t[2], self.coefficients)

    def inside(self, *coords):
        mask = True
        for c, (lo, hi) in zip(coords, self.box):
            c = np.asarray(c)
            mask = mask & (c >= lo) & (c <= hi)
        return mask


@dataclass(frozen=True)
class SampledFunction:
    """A function of ``arity`` real variables.

    ``evaluate`` is vectorized: it takes one array per coordinate (broadcast
    against each other) and returns complex values of the broadcast shape.
    When a cache is present, calls inside the box use the interpolant and
    calls outside it return 0.
    """
    arity: int
    evaluate: Callable
    decay_class: str = "exp_tempered"
    cache: ChebCache | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.decay_class not in DECAY_CLASSES:
            raise ValueError(f"unknown decay class {self.decay_class!r}")

    def __call__(self, *coords):
        if len(coords) != self.arity:
            raise ValueError(f"expected {self.arity} coordinates, got {len(coords)}")
        coords = np.broadcast_arrays(*[np.asarray(c, dtype=float) for c in coords])
        if self.cache is None:
            return np.asarray(self.evaluate(*coords), dtype=complex) * np.ones(coords[0].shape)
        return np.where(self.cache.inside(*coords), self.cache(*coords), 0.0 + 0.0j)

    def direct(self, *coords):
        coords = np.broadcast_arrays(*[np.asarray(c, dtype=float) for c in coords])
        return np.asarray(self.evaluate(*coords), dtype=complex) * np.ones(coords[0].shape)

    def scaled(self, a: complex) -> "SampledFunction":
        f = self.evaluate
        cache = None if self.cache is None else replace(self.cache, coefficients=a * self.cache.coefficients,
                                                        scale=abs(a) * self.cache.scale)
        return SampledFunction(self.arity, lambda *x: a * f(*x), self.decay_class, cache)


def cheb_nodes(n: int) -> np.ndarray:
    """First-kind Chebyshev nodes on [-1, 1] in the DCT-II order."""
    return np.cos(np.pi * (np.arange(n) + 0.5) / n)


def cheb_coefficients(values: np.ndarray) -> np.ndarray:
    """Tensor Chebyshev coefficients from samples at first-kind nodes (all axes)."""
    c = np.asarray(values, dtype=complex)
    for ax in range(c.ndim):
        n = c.shape[ax]
        c = (dct(c.real, type=2, axis=ax) + 1j * dct(c.imag, type=2, axis=ax)) / n
        idx = [slice(None)] * c.ndim
        idx[ax] = 0
        c[tuple(idx)] /= 2.0
    return c


PROBE_FACTOR = 3
PROBE_MAX_POINTS = 4000


def build_cache(f: SampledFunction, box: Sequence[Sequence[float]], degree_per_axis: int | Sequence[int],
                rel_threshold: float = 1e-7, seed: int = 0,
                probe_points: int = PROBE_MAX_POINTS) -> SampledFunction:
    """Attach a tensor Chebyshev interpolant on ``box`` to ``f``.

    The interpolant is probed on a grid three times denser than the node
    grid (a seeded random subset when that grid is large).  CacheAccuracyError
    is raised if the probe error exceeds rel_threshold * max|f|.
    """
    box = tuple((float(lo), float(hi)) for lo, hi in box)
    if len(box) != f.arity:
        raise ValueError("box dimension must match arity")
    degs = [degree_per_axis] * f.arity if np.isscalar(degree_per_axis) else list(degree_per_axis)
    axes = [0.5 * (lo + hi) + 0.5 * (hi - lo) * cheb_nodes(d + 1) for d, (lo, hi) in zip(degs, box)]
    grids = np.meshgrid(*axes, indexing="ij")
    values = f.direct(*grids)
    coeffs = cheb_coefficients(values)
    cache = ChebCache(box, coeffs, 0.0, float(np.max(np.abs(values))))

    probe_axes = [np.linspace(lo, hi, PROBE_FACTOR * (d + 1)) for d, (lo, hi) in zip(degs, box)]
    pgrid = [g.ravel() for g in np.meshgrid(*probe_axes, indexing="ij")]
    if len(pgrid[0]) > probe_points:
        rng = np.random.default_rng(seed)
        pick = rng.choice(len(pgrid[0]), probe_points, replace=False)
        pgrid = [g[pick] for g in pgrid]
    direct = f.direct(*pgrid)
    scale = max(cache.scale, float(np.max(np.abs(direct))))
    err = float(np.max(np.abs(cache(*pgrid) - direct)))
    cache = ChebCache(box, coeffs, err, scale)
    if err > rel_threshold * scale:
        raise CacheAccuracyError(f"cache probe error {err:.3e} exceeds {rel_threshold:.1e} * {scale:.3e}")
    return replace(f, cache=cache)


def default_box_left(params: ModelParams) -> float:
    """Left edge where beta*exp(-x1) reaches 40, beyond which the eigenfunctions are negligible."""
    return params.log_beta - math.log(40.0)
