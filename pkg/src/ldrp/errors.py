"""Exception types shared across the package."""


class ConfigError(Exception):
    """User-facing configuration problem (bad flags, bad dataset layout, mismatched params)."""


class StoreError(Exception):
    """Base class for feature-store file problems."""


class StoreMagicError(StoreError):
    """File does not start with the feature-store magic bytes."""


class StoreVersionError(StoreError):
    """Feature-store file declares an unsupported version."""


class StoreTruncatedError(StoreError):
    """Feature-store file ended early or carries trailing garbage."""


class StoreDimensionError(StoreError):
    """Header dimension is inconsistent with the declared descriptor parameters."""
