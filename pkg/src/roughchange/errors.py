"""Exception types shared across the package."""


class FormatError(ValueError):
    """An input file is not a supported image format (bad magic, corrupt
    header, unsupported bit depth or color type)."""


class DimensionMismatchError(ValueError):
    """Two rasters that must share dimensions do not."""
