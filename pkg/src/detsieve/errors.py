"""Exception hierarchy.  The CLI maps each class to an exit code."""


class DetsieveError(Exception):
    """Base class for all errors raised by the package."""

    exit_code = 1


class UsageError(DetsieveError, ValueError):
    """Bad arguments: mismatched field contexts, malformed associations, wrong arity."""

    exit_code = 2


class SpecError(UsageError):
    """Infeasible problem parameters, rejected before any work is done."""


class ContractError(UsageError):
    """An input violates the contract of the routine it was passed to."""


class UnsupportedOperation(UsageError):
    """The operation is undefined for this field or structure."""


class StructureError(UsageError):
    """Matrix structure does not permit the operation (e.g. non-alternating Pfaffian)."""


class ParseError(DetsieveError):
    """Malformed input file; the message carries the line number."""

    exit_code = 3

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class CapacityError(DetsieveError):
    """The field or a configured cap is too small for the request."""

    exit_code = 4
