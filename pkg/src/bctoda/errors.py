"""Exception hierarchy shared by all modules."""


class BCTodaError(Exception):
    """Base class for every error raised by the package."""


class UsageError(BCTodaError):
    """Bad user input (maps to CLI exit code 2)."""


class NumericError(BCTodaError):
    """Numerical failure (maps to CLI exit code 3)."""


class PoleError(NumericError):
    pass


class MaxDepthError(NumericError):
    pass


class NonFiniteError(NumericError):
    pass


class SingularityTooStrongError(UsageError):
    pass


class InvalidParamsError(UsageError):
    pass


class BLimitUnsupportedError(InvalidParamsError):
    """beta = 0 requested; use the beta -> 0 limit check instead."""


class DomainError(UsageError):
    pass


class DecayClassError(UsageError):
    pass


class SizeLimitError(UsageError):
    pass


class CacheAccuracyError(NumericError):
    pass


class BoxMarginError(UsageError):
    pass


class UnboundSymbolError(UsageError):
    pass


class DivisionFailsError(BCTodaError):
    pass


class OddPowersError(BCTodaError):
    pass


class DegenerateMuError(UsageError):
    pass


class UnknownCheckError(UsageError):
    pass
