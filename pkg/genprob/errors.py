"""
Exceptions raised by genprob.
"""
from __future__ import annotations


class InvalidInputError(ValueError):
    """Raised when an argument does not describe a valid group, element,
    subgroup, profile or probability parameter."""


class ResourceLimitError(RuntimeError):
    """Raised when an exhaustive computation would exceed its configured cap."""


class GuaranteeError(AssertionError):
    """Raised when a sufficient bound fails to deliver its guaranteed
    probability. Seeing this means a bug in genprob."""
