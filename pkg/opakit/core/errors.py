from typing import Optional, Sequence


class OpakitError(Exception):
    """Base class for every error raised by opakit."""


class ParseError(OpakitError, ValueError):
    """
    Raised when polynomial, scalar or descriptor text cannot be parsed.

    Attributes:
        position: Zero-based character offset where parsing failed
        text: The offending input
    """

    def __init__(self, message: str, position: int = 0, text: str = "") -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position
        self.text = text


class ModeError(OpakitError, ValueError):
    """Raised when exact arithmetic is requested for a space without rational weights."""


class DomainError(OpakitError, ValueError):
    """Raised when a point lies on or outside the boundary of the open domain."""


class DegenerateConfigurationError(OpakitError, ValueError):
    """Raised when a point configuration makes a kernel Gram determinant vanish."""


class SingularMatrixError(OpakitError, ArithmeticError):
    """
    Raised when exact elimination meets a column without a non-zero pivot.

    Attributes:
        pivot: Index of the first column with no usable pivot
    """

    def __init__(self, pivot: int) -> None:
        super().__init__(f"Singular system: no non-zero pivot in column {pivot}")
        self.pivot = pivot


class ConsistencyError(OpakitError, RuntimeError):
    """Raised when a computed object violates a property that must hold exactly."""


class ConvergenceError(OpakitError, RuntimeError):
    """
    Raised when the simultaneous root iteration fails to converge.

    Attributes:
        indices: Indices of the root estimates that did not converge
    """

    def __init__(self, indices: Sequence[int], message: Optional[str] = None) -> None:
        self.indices = list(indices)
        super().__init__(
            message or f"Root iteration did not converge for indices {self.indices}"
        )


class FixtureIntegrityError(OpakitError, RuntimeError):
    """Raised when an embedded fixture table fails its checksum."""
