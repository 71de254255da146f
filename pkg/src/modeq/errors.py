"""Exception types shared across the package."""


class ModeqError(Exception):
    """Base class for all errors raised by this package."""


class UndefinedVariable(ModeqError):
    """A formula mentions a variable outside the assignment's domain."""


class DomainMismatch(ModeqError):
    """An assignment's domain differs from the one an operation requires."""


class TautologicalClause(ModeqError):
    """A clause contains a literal together with its complement."""


class BoundVarAbsent(ModeqError):
    """A quantified variable does not occur in the matrix."""


class MalformedTheory(ModeqError):
    """A theory fails the membership check of the system it is used under."""


class ResourceLimit(ModeqError):
    """A configured size cap would be exceeded; failing loudly instead."""


class NotClosed(ModeqError):
    """A quantified formula has matrix variables outside its prefix."""


class NotPositive(ModeqError):
    """A program has nonempty negative bodies where none are allowed."""


class HaltedConfiguration(ModeqError):
    """A machine step was requested from an accepting or rejecting state."""


class LengthMismatch(ModeqError):
    """A witness string has the wrong length for the theory at hand."""


class NotDeterministic(ModeqError):
    """A deterministic-only operation received a nondeterministic machine."""


class InvalidSpec(ModeqError):
    """A machine specification violates its structural invariants."""


class NotAccepted(ModeqError):
    """A witness the deterministic table construction requires is rejected."""


class AmbiguousCell(ModeqError):
    """A table cell carries zero or several symbols where exactly one is needed."""


class ClauseNotInPi(ModeqError):
    """A clause falls outside the canonical three-variable clause pool."""


class TooSmall(ModeqError):
    """A generator parameter is below its minimum."""


class ParseError(ModeqError):
    """Malformed input text; carries a position when one is known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class HeaderMismatch(ParseError):
    """A DIMACS header disagrees with the body that follows it."""
