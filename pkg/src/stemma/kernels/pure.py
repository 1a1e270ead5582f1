"""Pure-Python raster kernel.

Reference implementation of the pixel loop: evaluate the compiled network at
every pixel center and map the output to an 8-bit gray level. The compiled
kernel in _native.pyx mirrors this arithmetic operation for operation; any
change here must be applied there too, or the two backends stop being
bit-identical.
"""

from __future__ import annotations

import math

from ..neat.network import (
    ACT_COSINE,
    ACT_LINEAR,
    ACT_SIGMOID,
    ACT_SINE,
    CompiledNetwork,
)

BACKEND_NAME = "pure"

_EXP_LIMIT = 700.0


def render_gray(net: CompiledNetwork, w: int, h: int) -> bytes:
    """Render a row-major grayscale byte raster of size w x h."""
    order = net.order
    acts = net.acts
    in_start = net.in_start
    in_count = net.in_count
    src = net.src
    wgt = net.wgt
    vals = [0.0] * net.n_slots
    vals[3] = 1.0  # bias slot
    out = bytearray(w * h)
    exp = math.exp
    sin = math.sin
    cos = math.cos
    sqrt = math.sqrt
    floor = math.floor
    pos = 0
    for j in range(h):
        y = -1.0 + 2.0 * (j + 0.5) / h
        for i in range(w):
            x = -1.0 + 2.0 * (i + 0.5) / w
            vals[0] = x
            vals[1] = y
            vals[2] = sqrt(x * x + y * y)
            for slot in order:
                total = 0.0
                start = in_start[slot]
                for k in range(start, start + in_count[slot]):
                    total += wgt[k] * vals[src[k]]
                code = acts[slot]
                if code == ACT_LINEAR:
                    v = total
                elif code == ACT_SIGMOID:
                    z = -4.9 * total
                    v = -1.0 if z > _EXP_LIMIT else 2.0 / (1.0 + exp(z)) - 1.0
                elif code == ACT_SINE:
                    v = sin(total)
                elif code == ACT_COSINE:
                    v = cos(total)
                else:  # ACT_GAUSSIAN
                    v = exp(-(total * total))
                vals[slot] = v
            o = vals[4]
            if o != o:
                o = 0.0
            if o < -1.0:
                o = -1.0
            elif o > 1.0:
                o = 1.0
            out[pos] = int(floor(255.0 * (o + 1.0) / 2.0 + 0.5))
            pos += 1
    return bytes(out)
