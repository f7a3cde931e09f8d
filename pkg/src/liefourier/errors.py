"""Exception types shared across the library."""


class ConfigurationError(ValueError):
    """Unsupported group, out-of-range parameter, or malformed config."""


class PreconditionError(ValueError):
    """An operation was called on inputs violating its stated contract."""


class MarginError(PreconditionError):
    """A dual-side operation lacks the truncation margin it needs.

    The message states the cutoff that would be required.
    """
