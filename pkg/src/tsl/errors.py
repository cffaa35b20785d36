"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "TslError",
    "DimensionError",
    "CarrierMismatchError",
    "CapacityError",
    "AmbiguityError",
    "MultiplicityError",
    "UnsupportedCaseError",
    "InternalInconsistencyError",
    "SpecError",
]


class TslError(Exception):
    """Base class for all package-specific failures."""


class DimensionError(TslError):
    """Objects over state spaces of different sizes were combined."""


class CarrierMismatchError(TslError):
    """A binary operation received measures over different carriers."""


class CapacityError(TslError):
    """An enumeration exceeded its configured cap.

    The message always names the cap so callers can raise it deliberately.
    """

    def __init__(self, message: str, cap: int | None = None):
        super().__init__(message)
        self.cap = cap


class AmbiguityError(TslError):
    """A factorization that must be unique has several witnesses."""


class MultiplicityError(TslError):
    """A stationary vector is not unique; carries the recurrent classes."""

    def __init__(self, message: str, classes: tuple[tuple[int, ...], ...] = ()):
        super().__init__(message)
        self.classes = classes


class UnsupportedCaseError(TslError):
    """The requested operation has a precondition this input does not meet."""


class InternalInconsistencyError(TslError):
    """Two results that must agree by theorem disagreed; always a bug."""


class SpecError(TslError):
    """A problem-spec file failed to parse; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
