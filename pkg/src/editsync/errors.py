"""Shared exception types."""

from __future__ import annotations


class CapExceeded(RuntimeError):
    """An exponential-cost operation would exceed its resource cap.

    ``required`` carries the estimated budget the operation would need.
    """

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


class ListBoundExceeded(RuntimeError):
    """More qualifying codewords than the configured output list bound.

    Raised instead of silently truncating; signals misconfigured recovery
    parameters.
    """
