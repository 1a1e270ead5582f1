"""Minimal 8-bit grayscale PNG writer (stdlib only).

One IDAT chunk, filter type 0 on every scanline, fixed zlib level so equal
rasters always encode to equal bytes.
"""

from __future__ import annotations

import struct
import zlib

_SIGNATURE = b"\x89PNG\r\n\x1a\n"
_ZLIB_LEVEL = 6


def _chunk(tag: bytes, payload: bytes) -> bytes:
    crc = zlib.crc32(tag + payload) & 0xFFFFFFFF
    return struct.pack(">I", len(payload)) + tag + payload + struct.pack(">I", crc)


def encode_gray_png(pixels: bytes, width: int, height: int) -> bytes:
    """Encode a row-major grayscale byte raster as a PNG file."""
    if width <= 0 or height <= 0:
        raise ValueError("width and height must be positive")
    if len(pixels) != width * height:
        raise ValueError(f"expected {width * height} pixels, got {len(pixels)}")
    ihdr = struct.pack(">IIBBBBB", width, height, 8, 0, 0, 0, 0)
    raw = bytearray()
    for row in range(height):
        raw.append(0)  # filter: none
        raw.extend(pixels[row * width:(row + 1) * width])
    idat = zlib.compress(bytes(raw), _ZLIB_LEVEL)
    return _SIGNATURE + _chunk(b"IHDR", ihdr) + _chunk(b"IDAT", idat) + _chunk(b"IEND", b"")


__all__ = ["encode_gray_png"]
