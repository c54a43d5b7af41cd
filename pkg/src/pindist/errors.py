"""Exception types shared across the package."""


class CapExceeded(ValueError):
    """An instance is larger than the configured enumeration cap."""


class InvariantViolation(RuntimeError):
    """Two independent computations disagreed, or a proven identity failed."""
