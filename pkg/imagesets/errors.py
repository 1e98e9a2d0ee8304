"""Exception types raised by the library.

Outer surfaces (CLI, MCP tools) translate these into exit codes or
``{"status": "error", ...}`` payloads.
"""


class ImageSetsError(ValueError):
    """Base class for every error raised by imagesets."""


class FieldError(ImageSetsError):
    """Invalid field parameters or an arithmetic domain error."""


class CapExceededError(ImageSetsError):
    """A table or spectrum would exceed the configured size cap."""


class ExpressionError(ImageSetsError):
    """Malformed expression, polynomial or table text."""


class HypothesisError(ImageSetsError):
    """A family constructor was called outside its stated hypotheses."""

    def __init__(self, clause: str, message: str | None = None):
        self.clause = clause
        super().__init__(message or f"hypothesis violated: {clause}")
