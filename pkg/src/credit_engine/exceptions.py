"""Exception types raised across the package."""


class CreditEngineError(Exception):
    """Base class for all package errors."""


class DomainError(CreditEngineError, ValueError):
    """An argument lies outside the domain of the operation."""


class InvalidAuthorCount(DomainError):
    """Author count is below 1 (or below the operation's minimum)."""


class AuthorCountRangeError(DomainError):
    """Author count exceeds the supported maximum."""


class UnknownMethodError(DomainError):
    """Counting-method or sampler identifier is not recognised."""


class SamplerLimitError(DomainError):
    """Rejection sampling requested where its acceptance rate is unusable."""


class InsufficientSamplesError(DomainError):
    """No accepted samples, or fewer samples requested than the minimum."""


class AcceptanceUnderflowError(CreditEngineError, ArithmeticError):
    """1/n! is not representable as a positive double."""


class UndefinedIndicatorError(CreditEngineError, ValueError):
    """Indicator is undefined, e.g. NCS against an uncited reference set."""


class BaselineMissingError(CreditEngineError, ValueError):
    """The single-author bin is missing or aggregates to zero."""


class DataError(CreditEngineError):
    """Input data could not be read or is structurally invalid."""


class StatsVersionError(DataError):
    """Stats file carries an unsupported version tag."""
