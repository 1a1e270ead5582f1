import io
import random

import pytest
from PIL import Image

from stemma.png import encode_gray_png


def decode(png_bytes):
    img = Image.open(io.BytesIO(png_bytes))
    assert img.mode == "L"
    return img


def test_roundtrip_random_images():
    rng = random.Random(4)
    for w, h in ((1, 1), (8, 8), (17, 5), (64, 64)):
        pixels = bytes(rng.randrange(256) for _ in range(w * h))
        img = decode(encode_gray_png(pixels, w, h))
        assert img.size == (w, h)
        assert img.tobytes() == pixels


def test_deterministic_encoding():
    pixels = bytes(range(256)) * 4
    a = encode_gray_png(pixels, 32, 32)
    b = encode_gray_png(pixels, 32, 32)
    assert a == b


def test_dimension_validation():
    with pytest.raises(ValueError):
        encode_gray_png(b"\x00" * 3, 2, 2)
    with pytest.raises(ValueError):
        encode_gray_png(b"", 0, 1)
