"""Exception types shared across the package."""


class CayleyDegError(Exception):
    """Base class for every error raised by this package."""


class ZeroInversion(CayleyDegError, ZeroDivisionError):
    pass


class NoRoot(CayleyDegError):
    pass


class SearchExhausted(CayleyDegError):
    pass


class FieldMismatch(CayleyDegError, TypeError):
    pass


class ZeroDenominator(CayleyDegError, ZeroDivisionError):
    pass


class PoleAtPoint(CayleyDegError, ZeroDivisionError):
    pass


class CharacteristicTooSmall(CayleyDegError):
    pass


class DegreeZero(CayleyDegError):
    pass


class ExpressionTooLarge(CayleyDegError):
    """Symbolic expansion exceeded the term guard; use sampled verification."""


class CapExceeded(CayleyDegError):
    pass


class BadParameter(CayleyDegError, ValueError):
    pass


class RankMismatch(CayleyDegError, ValueError):
    pass


class DegenerateSpec(CayleyDegError):
    pass


class Unstable(CayleyDegError):
    """Sampled degree estimates never settled on a unique modal value."""


class BadRoot(CayleyDegError, ValueError):
    pass


class NotOnHypersurface(CayleyDegError):
    pass


class HyperplaneCase(CayleyDegError):
    pass


class BadCharacteristic(CayleyDegError, ValueError):
    pass


class EliminationMismatch(CayleyDegError):
    def __init__(self, message, mismatches=None):
        super().__init__(message)
        self.mismatches = mismatches or {}


class SingularDenominator(CayleyDegError, ZeroDivisionError):
    pass
