"""Numerical eigenfunctions, Baxter operators and identity checks for open Toda chains with BC boundary."""
from .errors import BCTodaError, NumericError, UsageError
from .model import ModelParams, Point, SampledFunction, SpectralTuple, make_params
from .numerics import DEFAULT_SPEC, IntegralResult, QuadratureSpec

__all__ = [
    "BCTodaError",
    "DEFAULT_SPEC",
    "IntegralResult",
    "ModelParams",
    "NumericError",
    "Point",
    "QuadratureSpec",
    "SampledFunction",
    "SpectralTuple",
    "UsageError",
    "make_params",
]
