"""Shared exception types."""


class NumericError(RuntimeError):
    """A numeric computation failed (singular system, non-convergence, ...)."""
