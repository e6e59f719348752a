"""Raster ingestion and the scalar pixel transform feeding the detectors.

Color is collapsed per pixel to ``R + 2*G + 3*B`` so a whole image becomes
one integer field in [0, 1530]; grayscale maps through ``R = G = B = v``.
Quantization into equal-width bins over that full range turns the fields
into discrete attribute codes that are comparable across images.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO

import numpy as np
from PIL import Image, UnidentifiedImageError

from . import netpbm
from .errors import DimensionMismatchError, FormatError

SCALAR_MAX = 1530  # 255 + 2*255 + 3*255
SCALAR_RANGE = SCALAR_MAX + 1

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
# IHDR color types we accept: grayscale, truecolor, truecolor with alpha
_PNG_COLOR_TYPES = {0: 1, 2: 3, 6: 3}

__all__ = [
    "SCALAR_MAX",
    "SCALAR_RANGE",
    "RasterImage",
    "ScalarField",
    "load_image",
    "save_image",
    "transform_to_scalar",
    "abs_difference",
    "quantize",
]


@dataclass(frozen=True, eq=False)
class RasterImage:
    """8-bit pixel grid, ``(h, w)`` grayscale or ``(h, w, 3)`` RGB."""

    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.array(self.pixels, dtype=np.uint8, order="C", copy=True)
        if pixels.ndim == 3 and pixels.shape[2] == 1:
            pixels = pixels[:, :, 0]
        if pixels.ndim not in (2, 3) or (pixels.ndim == 3 and pixels.shape[2] != 3):
            raise ValueError(f"unsupported pixel array shape {pixels.shape}")
        if pixels.shape[0] < 1 or pixels.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        pixels.flags.writeable = False
        object.__setattr__(self, "pixels", pixels)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return 1 if self.pixels.ndim == 2 else 3

    @property
    def samples(self) -> np.ndarray:
        """Flat row-major, channel-interleaved sample view."""
        return self.pixels.reshape(-1)


@dataclass(frozen=True, eq=False)
class ScalarField:
    """One transformed integer in [0, 1530] per pixel."""

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.int64, order="C", copy=True)
        if values.ndim != 2:
            raise ValueError("scalar field must be 2-D")
        if values.shape[0] < 1 or values.shape[1] < 1:
            raise ValueError("scalar field must be at least 1x1")
        if values.min() < 0 or values.max() > SCALAR_MAX:
            raise ValueError(f"scalar values must lie in [0, {SCALAR_MAX}]")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


def _decode_png(data: bytes) -> np.ndarray:
    if len(data) < 33 or data[12:16] != b"IHDR":
        raise FormatError("corrupt PNG: missing IHDR")
    bit_depth, color_type = data[24], data[25]
    if bit_depth != 8:
        raise FormatError(f"only 8-bit PNG is supported (got bit depth {bit_depth})")
    if color_type not in _PNG_COLOR_TYPES:
        raise FormatError(f"unsupported PNG color type {color_type}")
    try:
        with Image.open(io.BytesIO(data)) as img:
            img.load()
            pixels = np.asarray(img)
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as exc:
        raise FormatError(f"corrupt PNG: {exc}") from None
    if pixels.ndim == 3 and pixels.shape[2] == 4:
        pixels = pixels[:, :, :3]  # alpha plays no role in the transform
    return pixels


def load_image(source: str | Path | BinaryIO) -> RasterImage:
    """Read a PNG, PGM, or PPM image from a path or binary stream.

    Only 8-bit grayscale and RGB data are accepted; PNG alpha is stripped.
    Raises :class:`FormatError` for anything else, OSError for unreadable
    paths.
    """
    if hasattr(source, "read"):
        data = source.read()
    else:
        data = Path(source).read_bytes()
    if data[:8] == _PNG_SIGNATURE:
        return RasterImage(_decode_png(data))
    if data[:2] in (b"P2", b"P3", b"P5", b"P6"):
        return RasterImage(netpbm.decode(data))
    if data[:2] in (b"P1", b"P4"):
        raise FormatError("PBM bitmaps are not supported")
    raise FormatError("unrecognized image format")


def save_image(image: RasterImage, dest: str | Path) -> None:
    """Write an image as PNG, PGM, or PPM according to the file suffix."""
    dest = Path(dest)
    suffix = dest.suffix.lower()
    if suffix == ".png":
        Image.fromarray(image.pixels, mode="L" if image.channels == 1 else "RGB").save(
            dest, format="PNG"
        )
    elif suffix == ".pgm":
        if image.channels != 1:
            raise ValueError("PGM stores grayscale; image has 3 channels")
        netpbm.write(dest, image.pixels)
    elif suffix == ".ppm":
        if image.channels != 3:
            raise ValueError("PPM stores RGB; image has 1 channel")
        netpbm.write(dest, image.pixels)
    else:
        raise ValueError(f"unsupported output suffix {suffix!r} (use .png/.pgm/.ppm)")


def transform_to_scalar(image: RasterImage) -> ScalarField:
    """Collapse each pixel to the weighted channel sum R + 2*G + 3*B."""
    pixels = image.pixels.astype(np.int64)
    if image.channels == 1:
        values = 6 * pixels
    else:
        values = pixels[:, :, 0] + 2 * pixels[:, :, 1] + 3 * pixels[:, :, 2]
    return ScalarField(values)


def abs_difference(a: ScalarField, b: ScalarField) -> ScalarField:
    """Per-pixel absolute difference of two equally sized fields."""
    if a.values.shape != b.values.shape:
        raise DimensionMismatchError(
            f"field dimensions differ: {a.width}x{a.height} vs {b.width}x{b.height}"
        )
    return ScalarField(np.abs(a.values - b.values))


def quantize(field: ScalarField, bins: int) -> np.ndarray:
    """Map scalar values to codes ``floor(v * bins / 1531)`` in [0, bins).

    Bins have equal width over the full theoretical range, not the
    observed one, so codes are comparable across images.
    """
    bins = int(bins)
    if not 1 <= bins <= SCALAR_RANGE:
        raise ValueError(f"bins must lie in [1, {SCALAR_RANGE}], got {bins}")
    return (field.values * bins) // SCALAR_RANGE
