# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled raster kernel.

Direct translation of kernels/pure.py. Both kernels must stay bit-identical:
same operations in the same order on IEEE doubles (the extension is built
with -ffp-contract=off so the compiler cannot fuse multiply-adds).
"""

from libc.math cimport cos, exp, floor, sin, sqrt

BACKEND_NAME = "native"

cdef double _EXP_LIMIT = 700.0


def render_gray(net, int w, int h):
    """Render a row-major grayscale byte raster of size w x h."""
    cdef int[::1] order = net.order
    cdef int[::1] acts = net.acts
    cdef int[::1] in_start = net.in_start
    cdef int[::1] in_count = net.in_count
    cdef int[::1] src = net.src
    cdef double[::1] wgt = net.wgt
    cdef int n_slots = net.n_slots
    cdef int n_order = order.shape[0]

    out_py = bytearray(w * h)
    cdef unsigned char[::1] out = out_py
    vals_py = bytearray(8 * n_slots)
    cdef double[::1] vals = memoryview(vals_py).cast("d")

    cdef int i, j, t, slot, start, k, code, pos
    cdef double x, y, total, v, o, z

    for t in range(n_slots):
        vals[t] = 0.0
    vals[3] = 1.0  # bias slot

    pos = 0
    for j in range(h):
        y = -1.0 + 2.0 * (j + 0.5) / h
        for i in range(w):
            x = -1.0 + 2.0 * (i + 0.5) / w
            vals[0] = x
            vals[1] = y
            vals[2] = sqrt(x * x + y * y)
            for t in range(n_order):
                slot = order[t]
                total = 0.0
                start = in_start[slot]
                for k in range(start, start + in_count[slot]):
                    total += wgt[k] * vals[src[k]]
                code = acts[slot]
                if code == 0:    # linear
                    v = total
                elif code == 1:  # sigmoid
                    z = -4.9 * total
                    v = -1.0 if z > _EXP_LIMIT else 2.0 / (1.0 + exp(z)) - 1.0
                elif code == 2:  # sine
                    v = sin(total)
                elif code == 3:  # cosine
                    v = cos(total)
                else:            # gaussian
                    v = exp(-(total * total))
                vals[slot] = v
            o = vals[4]
            if o != o:
                o = 0.0
            if o < -1.0:
                o = -1.0
            elif o > 1.0:
                o = 1.0
            out[pos] = <unsigned char>(<int>floor(255.0 * (o + 1.0) / 2.0 + 0.5))
            pos += 1
    return bytes(out_py)
