"""Exception types raised across the package."""


class QTLiftError(Exception):
    """Base class for all package errors."""


class DivisionByZero(QTLiftError, ZeroDivisionError):
    pass


class ZeroInput(QTLiftError, ValueError):
    pass


class DimensionMismatch(QTLiftError, ValueError):
    pass


class ContextMismatch(QTLiftError, ValueError):
    pass


class SizeMismatch(QTLiftError, ValueError):
    pass


class NotAUnit(QTLiftError, ValueError):
    pass


class NotCentral(QTLiftError, ValueError):
    pass


class IndexClash(QTLiftError, ValueError):
    pass


class NonRationalEvaluation(QTLiftError, ValueError):
    pass


class WrongTauMode(QTLiftError, ValueError):
    pass


class InvariantViolation(QTLiftError, ValueError):
    pass


class NotClosed(InvariantViolation):
    """A derivation bracket leaves the span of the declared basis."""


class NotNilpotentShape(QTLiftError, ValueError):
    pass


class EtaEscapesL(QTLiftError, RuntimeError):
    """eta'(D) is not contained in the embedded copy of L."""


class NotStablyElementaryCertificate(QTLiftError, ValueError):
    pass


class ConfigError(QTLiftError, ValueError):
    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
