"""Exception types shared across the package."""


class RydisError(Exception):
    """Base class for package-specific failures."""


class CapacityError(RydisError):
    """A resource guard (state size, independent-set count, vertex count) was exceeded."""


class ConvergenceError(RydisError):
    """A propagator failed to meet its tolerance within the step budget."""


class GraphFormatError(RydisError, ValueError):
    """A graph text file could not be parsed; the message names the offending line."""
