"""Exception types shared across the simulator."""


class ConfigurationError(ValueError):
    """A requested configuration cannot be simulated or analysed."""


class CoverageError(ConfigurationError):
    """A throughput curve does not span the load range a model requires."""


class InputDataError(ValueError):
    """An input file is missing, unreadable, or malformed."""
