"""
Errors
Exception hierarchy shared by the library layer and the command line.
"""

from typing import Iterable, Optional


# Exit codes used by the command line front end
EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


class CyclicSortError(Exception):
    """Base class for every error raised by this package."""

    exit_code = EXIT_USAGE


class DomainError(CyclicSortError, ValueError):
    """A precondition on sizes, indices or values was violated."""


class ParseError(DomainError):
    """A permutation word or cycle could not be parsed."""

    def __init__(self, message: str, token: Optional[str] = None):
        super().__init__(message)
        self.token = token


class ConfigurationError(CyclicSortError):
    """The run configuration is invalid."""


class ResourceLimitError(CyclicSortError):
    """A computation was refused because it exceeds a size or memory cap."""

    exit_code = EXIT_RESOURCE

    def __init__(self, message: str, required_bytes: Optional[int] = None,
                 cap_bytes: Optional[int] = None):
        super().__init__(message)
        self.required_bytes = required_bytes
        self.cap_bytes = cap_bytes


class _UnknownNameError(DomainError):
    kind = "name"

    def __init__(self, name: str, available: Iterable[str]):
        self.name = name
        self.available = sorted(available)
        super().__init__(
            f"Unknown {self.kind} '{name}'. Available: {', '.join(self.available)}"
        )


class UnknownSuiteError(_UnknownNameError):
    kind = "suite"


class UnknownStatisticError(_UnknownNameError):
    kind = "statistic"


def format_bytes(size: int) -> str:
    """Render a byte count with a binary suffix, e.g. 1.5 GiB."""
    value = float(size)
    for unit in ("B", "KiB", "MiB", "GiB", "TiB"):
        if value < 1024 or unit == "TiB":
            return f"{value:,.1f} {unit}" if unit != "B" else f"{int(value):,} B"
        value /= 1024
    return f"{size:,} B"
