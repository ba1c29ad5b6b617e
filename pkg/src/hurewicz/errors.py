"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: DomainError -> 1, ResourceError -> 2,
VerificationError -> 3.
"""


class HurewiczError(Exception):
    exit_code = 1


class DomainError(HurewiczError, ValueError):
    """Input outside the mathematical domain of an operation."""


class Undetermined(DomainError):
    """A finite prefix is too short to fix the requested output."""


class OutsideDomain(DomainError):
    """A point or prefix fails a map's domain condition."""


class ResourceError(HurewiczError):
    """A configured cap was hit. Never a silent truncation."""

    exit_code = 2


class VerificationError(HurewiczError):
    exit_code = 3
