"""Exception types shared across the package."""


class SurfalgError(Exception):
    """Base class for package errors."""


class InputError(SurfalgError):
    """Malformed presentation, surface, map, or run configuration."""


class ReductionDivergence(SurfalgError):
    """Rewriting exceeded the configured length or step budget."""


class InternalInvariantError(SurfalgError):
    """An internal consistency check failed; should never fire on valid input."""
