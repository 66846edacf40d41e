"""Exception hierarchy shared across the workbench."""

__all__ = [
    "FolnerlabError",
    "GroupMismatchError",
    "SystemMismatchError",
    "SizeLimitError",
    "SearchBudgetExceededError",
    "UnsupportedCaseError",
    "ConfigError",
]


class FolnerlabError(Exception):
    """Base class for every error raised by this package."""


class GroupMismatchError(FolnerlabError):
    """Two objects built over different groups were combined."""


class SystemMismatchError(FolnerlabError):
    """Two objects built over different dynamical systems were combined."""


class SizeLimitError(FolnerlabError):
    """A requested computation exceeds a hard size cap."""


class SearchBudgetExceededError(FolnerlabError):
    """A bounded search ran out of budget before finding a witness."""


class UnsupportedCaseError(FolnerlabError):
    """The inputs are valid objects but outside the supported regime."""


class ConfigError(FolnerlabError):
    """A run configuration failed validation."""

    def __init__(self, message: str, key_path: str | None = None):
        super().__init__(message if key_path is None else f"{key_path}: {message}")
        self.key_path = key_path
