"""Exception hierarchy for chipfire.

Every exception carries the process exit code the CLI reports for it.
"""


class ChipfireError(Exception):
    """Base class for all chipfire errors."""

    exit_code: int = 1


class InvalidInputError(ChipfireError, ValueError):
    """Malformed graph, divisor or certificate input."""

    exit_code = 2


class GraphFormatError(InvalidInputError):
    """Graph text that cannot be loaded."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(ChipfireError, ValueError):
    """An operation was called outside its precondition."""

    exit_code = 2


class InfeasibleError(ChipfireError):
    """No divisor in the restricted search space reaches the target rank."""

    exit_code = 2


class BudgetExceededError(ChipfireError):
    """A search ran out of wall-clock budget before deciding its answer."""

    exit_code = 3


class ReproductionMismatchError(ChipfireError):
    """A named reproduction computed a value different from the expected one."""

    exit_code = 4
