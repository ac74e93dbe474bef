"""Exception types shared across the package."""


class ScanPlanError(Exception):
    """Base class for all errors raised by scanplan."""


class InvalidArgument(ScanPlanError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(ScanPlanError, ValueError):
    """The inputs fall outside the region where a model is defined."""


class UnreachableTarget(DomainError):
    """A detection-probability target can never be met."""


class UnsupportedOperation(ScanPlanError, TypeError):
    """The operation is not defined for this kind of path."""


class ConfigError(ScanPlanError, ValueError):
    """A configuration file could not be parsed or validated."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
