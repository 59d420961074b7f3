"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """A mathematically invalid input (negative weight, scale < 2, ...)."""


class UsageError(ValueError):
    """A structurally invalid call (length mismatch, too few radii, ...)."""


class OverlapError(DomainError):
    """Raised by cylinder and frame operations on digit systems whose
    first-level images may overlap (digits not pairwise distinct mod R)."""


class SizeLimitError(UsageError):
    """Raised when a requested dense computation exceeds the memory guard."""
