"""Exception types shared across the package."""


class ChiralWalkError(Exception):
    """Base class for all chiralwalk-specific errors."""


class InvalidSizeError(ChiralWalkError, ValueError):
    """Graph or lattice size below the minimum the construction needs."""


class TopologyError(ChiralWalkError, ValueError):
    """Operation applied to a graph whose topology does not support it."""


class ConditionError(ChiralWalkError, ValueError):
    """Parameters fall outside the regime where the requested result holds."""


class NumericalError(ChiralWalkError, RuntimeError):
    """A numerical routine failed to converge or breached its residual bound."""
