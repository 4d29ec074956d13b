"""Exception types shared across the library."""


class WeakstarError(Exception):
    """Base class for all library errors."""


class DimensionError(WeakstarError, ValueError):
    """Unsupported or mismatched spatial dimension."""


class ParameterError(WeakstarError, ValueError):
    """A numeric parameter is out of its admissible range."""


class ResolutionError(WeakstarError, ValueError):
    """A requested frequency band exceeds what the grid can represent."""


class BandCoverageError(WeakstarError, ValueError):
    """A spectral vector or system does not cover the required band."""


class SlowDecayError(WeakstarError, ValueError):
    """Kernel coefficients decay too slowly for the analytic tail policy."""


class BasisLookupError(WeakstarError, LookupError):
    """A basis index does not belong to the system it was used with."""


class ConfigError(WeakstarError, ValueError):
    """An experiment configuration is malformed."""
