"""Exception hierarchy shared across the toolkit."""


class PcffwmError(Exception):
    """Base class for all toolkit errors."""


class DomainError(PcffwmError):
    """An evaluation was requested outside a model's validity domain."""


class ModelBreakdownError(PcffwmError):
    """The empirical reconstruction produced an unphysical intermediate
    (negative radicand); the fit cannot be trusted at this point."""


class NotFoundError(PcffwmError):
    """A root or feature (ZDW, pump wavelength) does not exist in the
    searched window."""


class ConfigError(PcffwmError):
    """Invalid or inconsistent configuration."""


class DataFileError(PcffwmError):
    """A bundled data file is malformed or fails its checksum."""
