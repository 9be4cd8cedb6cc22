"""Exception hierarchy shared by the library and the CLI.

Each class carries the process exit code the CLI maps it to.
"""

from __future__ import annotations


class RAEError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class UsageError(RAEError):
    """Bad arguments to an operation (wrong enum member, index out of range)."""

    exit_code = 2


class InputError(RAEError):
    """Invalid input data. ``code`` is a short machine-readable tag."""

    exit_code = 3

    def __init__(self, message: str, code: str = "invalid"):
        super().__init__(message)
        self.code = code


class CapacityError(RAEError):
    """Problem size exceeds a hard engine cap."""

    exit_code = 4
