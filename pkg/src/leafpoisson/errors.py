"""Exception hierarchy shared by all modules."""


class LeafPoissonError(Exception):
    """Base class for every library-specific error."""


class UsageError(LeafPoissonError):
    """A caller violated a documented precondition."""


class ChartMismatchError(UsageError):
    """Two operands were built over different charts."""


class ParseError(LeafPoissonError):
    """Malformed textual or JSON input.

    ``line`` and ``column`` are 1-based when known, else None.
    """

    def __init__(self, message, line=None, column=None):
        if column is not None and line is not None:
            message = f"{message} (line {line}, column {column})"
        elif column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class SingularRestrictionError(LeafPoissonError):
    """A denominator vanishes identically on the leaf y = 0."""


class HorizontalDegeneracyError(LeafPoissonError):
    """The leaf-leaf block of a bivector is singular, so no connection exists."""


class DataDegeneracyError(LeafPoissonError):
    """A leaf 2-form that must be invertible is singular."""


class NonPolynomialJetError(UsageError):
    """Fiber-degree grading was requested for a coefficient with y in a denominator."""


class MalformedTargetError(UsageError):
    """A homological solve target is neither exact nor a cocycle."""


class InternalInvariantError(LeafPoissonError):
    """A structural identity the library guarantees failed to hold (a bug)."""
