"""Minimal netpbm codec: reads PGM (P2/P5) and PPM (P3/P6), writes the
binary variants with maxval 255.

Only 8-bit data is accepted; a maxval above 255 is a format error, not a
conversion. Sample values are stored as-is (no rescaling to the maxval).
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .errors import FormatError

_WHITESPACE = b" \t\n\r\x0b\x0c"
_COMMENT = re.compile(rb"#[^\n\r]*")


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        ch = data[pos]
        if ch in _WHITESPACE:
            pos += 1
        elif ch == 0x23:  # '#' comment runs to end of line
            while pos < n and data[pos] not in b"\n\r":
                pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos] not in _WHITESPACE and data[pos] != 0x23:
        pos += 1
    if start == pos:
        raise FormatError("truncated netpbm header")
    return data[start:pos], pos


def _header_int(data: bytes, pos: int, what: str) -> tuple[int, int]:
    token, pos = _next_token(data, pos)
    if not token.isdigit():
        raise FormatError(f"bad netpbm {what}: {token!r}")
    return int(token), pos


def decode(data: bytes) -> np.ndarray:
    """Decode PGM/PPM bytes to a (h, w) or (h, w, 3) uint8 array."""
    magic = data[:2]
    if magic not in (b"P2", b"P3", b"P5", b"P6"):
        raise FormatError(f"not a supported netpbm file (magic {magic!r})")
    channels = 3 if magic in (b"P3", b"P6") else 1
    binary = magic in (b"P5", b"P6")

    pos = 2
    width, pos = _header_int(data, pos, "width")
    height, pos = _header_int(data, pos, "height")
    maxval, pos = _header_int(data, pos, "maxval")
    if width < 1 or height < 1:
        raise FormatError(f"bad netpbm dimensions {width}x{height}")
    if not 1 <= maxval <= 65535:
        raise FormatError(f"bad netpbm maxval {maxval}")
    if maxval > 255:
        raise FormatError(f"16-bit netpbm (maxval {maxval}) is not supported")

    count = width * height * channels
    if binary:
        # exactly one whitespace byte separates the maxval from the raster
        if pos >= len(data) or data[pos] not in _WHITESPACE:
            raise FormatError("missing raster separator")
        raster = data[pos + 1 : pos + 1 + count]
        if len(raster) < count:
            raise FormatError("truncated netpbm raster")
        samples = np.frombuffer(raster, dtype=np.uint8).astype(np.int64)
    else:
        text = _COMMENT.sub(b"", data[pos:])
        tokens = text.split()
        if len(tokens) < count:
            raise FormatError("truncated netpbm raster")
        try:
            samples = np.array([int(t) for t in tokens[:count]], dtype=np.int64)
        except ValueError as exc:
            raise FormatError(f"bad netpbm sample: {exc}") from None
    if samples.min() < 0 or samples.max() > maxval:
        raise FormatError("netpbm sample exceeds maxval")

    pixels = samples.astype(np.uint8)
    if channels == 3:
        return pixels.reshape(height, width, 3)
    return pixels.reshape(height, width)


def encode(pixels: np.ndarray) -> bytes:
    """Encode a uint8 array as binary PGM (2-D input) or PPM (h, w, 3)."""
    pixels = np.asarray(pixels)
    if pixels.dtype != np.uint8:
        raise ValueError("netpbm encoding expects uint8 samples")
    if pixels.ndim == 2:
        magic = b"P5"
    elif pixels.ndim == 3 and pixels.shape[2] == 3:
        magic = b"P6"
    else:
        raise ValueError(f"cannot encode array of shape {pixels.shape} as netpbm")
    height, width = pixels.shape[:2]
    header = magic + b"\n%d %d\n255\n" % (width, height)
    return header + np.ascontiguousarray(pixels).tobytes()


def write(path: str | Path, pixels: np.ndarray) -> None:
    Path(path).write_bytes(encode(pixels))
