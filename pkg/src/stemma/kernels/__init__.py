"""Raster kernel backend selection.

Prefers the compiled Cython kernel; falls back to the pure-Python one when
the extension is absent or when STEMMA_PURE_PYTHON=1 is set. Both expose
render_gray(net, w, h) -> bytes and are bit-identical by contract.
"""

from __future__ import annotations

import os

from . import pure

if os.environ.get("STEMMA_PURE_PYTHON") == "1":
    _impl = pure
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = pure

render_gray = _impl.render_gray


def active_backend() -> str:
    """Name of the kernel in use: 'native' or 'pure'."""
    return _impl.BACKEND_NAME


def available_backends() -> dict:
    """All importable kernels, keyed by name (used by tests and benchmarks)."""
    backends = {"pure": pure}
    try:
        from . import _native
        backends["native"] = _native
    except ImportError:
        pass
    return backends


__all__ = ["render_gray", "active_backend", "available_backends"]
