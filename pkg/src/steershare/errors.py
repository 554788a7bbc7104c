"""Exception types raised by the steershare pipeline."""


class SteershareError(ValueError):
    """Base class for all steershare errors."""


class DimensionOverflowError(SteershareError):
    """Tensor product would exceed the supported 64-dimensional limit."""


class ShapeError(SteershareError):
    """Matrix dimensions inconsistent with the requested operation."""


class NotHermitianError(SteershareError):
    """Operation requires a Hermitian matrix."""


class NotPSDError(SteershareError):
    """Matrix has an eigenvalue below the PSD clamping threshold."""


class NotCompressibleError(SteershareError):
    """State has weight outside the two-basis compression subspace."""


class DegenerateSteererError(SteershareError):
    """Steering party is (numerically) pure; ellipsoid formulas degenerate."""


class AmbiguousSettingError(SteershareError):
    """Degenerate spectrum leaves the optimal setting undetermined."""


class ConfigError(SteershareError):
    """Invalid or inconsistent scenario configuration."""


class UnsupportedSizeError(SteershareError):
    """Requested size exceeds what this artifact supports."""
