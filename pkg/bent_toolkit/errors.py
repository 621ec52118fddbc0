"""Exception hierarchy shared by the toolkit and the command-line manager."""


class BentToolkitError(Exception):
    """Base class for every error raised by bent_toolkit."""


class FormatError(BentToolkitError):
    """Malformed truth-table, mask or permutation text, or an unreadable table file."""


class DimensionError(BentToolkitError):
    """Operands disagree on their variable count or a vector has the wrong length."""


class CapacityError(BentToolkitError):
    """A variable count exceeds a configured cap."""


class IntegrityError(BentToolkitError):
    """An identity that must always hold was violated; points at an implementation bug."""


class PreconditionError(BentToolkitError):
    """A bentness precondition failed. The message names the failing condition."""


class RefusalError(BentToolkitError):
    """An exhaustive sweep was refused because its domain is too large."""

    def __init__(self, message: str, cost: int):
        super().__init__(message)
        self.cost = cost
