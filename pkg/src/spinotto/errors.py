"""Exception types shared across the package."""


class SpinottoError(Exception):
    """Base class for all package errors."""


class ChainTooLargeError(SpinottoError):
    """Requested spin count exceeds the configured Hilbert-space cap."""


class NumericalError(SpinottoError):
    """A numerical routine failed to converge or produced an invalid result."""


class GridError(SpinottoError):
    """A scan grid does not bracket the feature it is supposed to resolve."""
