"""
Module: exceptions
Purpose: Custom exception hierarchy for Dissiwire.
"""


class DissiwireError(Exception):
    """Base exception for Dissiwire."""

    pass


class ConfigError(DissiwireError):
    pass


class DimensionError(DissiwireError):
    pass


class PhysicalityError(DissiwireError):
    pass


class NumericalGuardError(DissiwireError):
    """Raised when a numerical precondition or guard trips."""

    pass


class StepSizeError(NumericalGuardError):
    pass


class DriftError(NumericalGuardError):
    pass


class InconsistentModelError(NumericalGuardError):
    pass


class InvariantUndefinedError(NumericalGuardError):
    pass


class NotChiralError(DissiwireError):
    """Raised when a Bloch field has no unique chiral axis."""

    def __init__(self, message: str, reason: str = "violation"):
        super().__init__(message)
        self.reason = reason


class OracleError(DissiwireError):
    pass
