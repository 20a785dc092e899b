"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A configuration value is out of range, inconsistent, or unsupported.

    Raised during scenario parsing, timeline construction, and any other
    place where a 3GPP constraint (periodicity sets, burst window, carrier
    bounds) is violated. The CLI maps this to exit code 1.
    """


class DomainError(ValueError):
    """A runtime argument is outside the function's mathematical domain."""


class NotApplicableError(RuntimeError):
    """An operation was requested for a mode it is not defined in."""
