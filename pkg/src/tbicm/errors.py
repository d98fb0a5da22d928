"""Exception types shared across the package."""


class TbicmError(Exception):
    """Base class for all package errors."""


class ConfigurationError(TbicmError):
    """Invalid or unsupported configuration value."""


class FrameFormatError(TbicmError):
    """Input sequence has the wrong length or layout for the operation."""


class RetryExhaustedError(TbicmError):
    """Randomized construction failed after the allowed number of restarts."""


class NumericError(TbicmError):
    """Non-finite values where finite numbers are required."""


class ContractViolationError(TbicmError):
    """Caller broke an API contract (e.g. missing distance cache on reuse)."""
