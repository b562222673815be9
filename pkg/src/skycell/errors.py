"""Exception types shared across the simulator."""


class SimulationError(Exception):
    """Base class for all simulator errors."""


class ConfigurationError(SimulationError):
    """Invalid configuration value, key, or file."""


class DomainError(SimulationError):
    """Input outside the physical or mathematical domain of a model."""


class DegenerateLinkError(DomainError):
    """UAV and sector antenna coincide (zero 3D distance)."""
