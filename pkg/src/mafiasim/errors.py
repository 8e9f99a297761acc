class ConfigurationError(ValueError):
    """Invalid parameters, scenario definitions or run settings."""


class SimulationError(RuntimeError):
    """A run produced a non-finite value."""
