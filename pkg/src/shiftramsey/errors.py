"""Exception hierarchy shared by every module."""


class ShiftRamseyError(Exception):
    """Base class for library errors."""


class GuardError(ShiftRamseyError):
    """A size or work guard refused the request (CLI exit code 3)."""


class SizeGuardError(GuardError):
    pass


class BudgetExhausted(GuardError):
    """An exact search ran out of its node budget before reaching an answer."""


class TowerOverflow(GuardError):
    """A tower-sized integer cannot be materialized."""

    def __init__(self, message: str, height: int):
        super().__init__(message)
        self.height = height


class InsufficientHost(GuardError):
    """The host is smaller than the bound an extraction procedure requires."""


class HypothesisViolation(ShiftRamseyError, ValueError):
    """Parameters do not satisfy an extraction procedure's precondition."""


class ColoringFormatError(ShiftRamseyError, ValueError):
    """A coloring file could not be parsed against its host."""

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class VerificationFailure(ShiftRamseyError, AssertionError):
    """A certified edge failed re-verification (signals an implementation bug)."""
