"""Exception types shared across the package."""


class OrchardError(Exception):
    """Base class for all package-specific errors."""


class AmbiguousSign(OrchardError):
    """Raised when the adaptive sign protocol hits its precision cap
    without certifying a sign and no exact fallback is available."""

    def __init__(self, precision_cap: int, message: str = ""):
        self.precision_cap = precision_cap
        super().__init__(
            message or f"sign undecided at precision cap {precision_cap} bits"
        )


class IdenticalPoints(OrchardError):
    """join() called on two projectively equal points."""


class IdenticalLines(OrchardError):
    """meet() called on two projectively equal lines."""


class ZeroTriple(OrchardError):
    """A homogeneous triple with all three entries zero."""


class DuplicatePoint(OrchardError):
    """Two projectively equal points in a configuration."""


class DegeneratePencil(OrchardError):
    """All configuration points collinear: the dual arrangement is a pencil."""


class NonRationalInput(OrchardError):
    """An operation restricted to exact-rational scalars got something else."""


class DegenerateNinePoints(OrchardError):
    """The two line triples do not define nine distinct intersection points."""


class OffCurve(OrchardError):
    """A point claimed to lie on a curve fails its equation."""


class OffLine(OrchardError):
    """A point claimed to lie on a line fails the incidence test."""


class SingularPoint(OrchardError):
    """The singular point of a cubic passed where a smooth point is needed."""


class DomainError(OrchardError):
    """Input outside the mathematical domain of a map."""


class UnnormalizedInput(OrchardError):
    """A conic/line pair not in one of the supported normal forms."""


class ConcurrentLines(OrchardError):
    """Three lines meet at a single point where a triangle is required."""


class InvalidParameter(OrchardError):
    """A family specification parameter outside its allowed range."""


class GroupTooLarge(OrchardError):
    """Exhaustive subgroup search is infeasible for this group order."""


class ParseError(OrchardError):
    """A malformed document; carries line/column when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)


class FieldEscapeWarning(UserWarning):
    """A symbolic configuration was mapped outside its symbolic field and
    fell back to adaptive-real coordinates."""
