"""Exception hierarchy. The CLI maps each class to an exit code."""


class WeylfoldError(Exception):
    exit_code = 1


class InvalidInput(WeylfoldError, ValueError):
    exit_code = 2


class BudgetExceeded(WeylfoldError):
    exit_code = 3


class ConsistencyError(WeylfoldError):
    """A combinatorial identity that must hold was violated (a bug signal)."""

    exit_code = 4
