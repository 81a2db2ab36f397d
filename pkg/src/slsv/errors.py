"""Exception types shared across the solver suite."""


class SlsvError(Exception):
    """Base class for all solver errors."""


class ConfigurationError(SlsvError):
    """Invalid run configuration, preset, or constructor argument."""


class DataError(SlsvError):
    """Non-finite or otherwise malformed field data."""


class StepError(SlsvError):
    """A time step could not be completed (e.g. crossing characteristics)."""


class LimiterError(SlsvError):
    """Limiter preconditions violated (positivity already lost upstream)."""


class SolverError(SlsvError):
    """Linear solver failure in the field solve."""
