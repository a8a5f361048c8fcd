"""Exception hierarchy shared by the library and the command line."""


class ZdmultError(Exception):
    """Base class for library errors."""


class DimensionMismatch(ZdmultError, ValueError):
    pass


class HypothesisViolation(ZdmultError):
    """An input violates the hypothesis an operation depends on
    (aligned inputs to an avoiding construction, commutative ring for the
    order-separating sequence, and so on)."""


class NotProper(HypothesisViolation):
    """The multiplication is not certified free of zero divisors."""


class SearchExhausted(ZdmultError):
    """A bounded search ran past its radius without finding a candidate."""

    def __init__(self, message: str, *, stage: int | None = None, constraint: str | None = None):
        super().__init__(message)
        self.stage = stage
        self.constraint = constraint


class StraddleError(ZdmultError):
    """An interval enclosure straddles a discontinuity of the fractional part
    even at the maximal working precision."""

    def __init__(self, message: str, *, precision: int):
        super().__init__(message)
        self.precision = precision


class ParseError(ZdmultError, ValueError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
