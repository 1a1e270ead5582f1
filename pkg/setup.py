"""Build script for the optional compiled raster kernel.

The package is pure Python except for stemma/kernels/_native.pyx, a Cython
translation of the pixel loop. If the extension cannot be built (no compiler,
no Cython) the install still succeeds and the pure-Python kernel is used.

-ffp-contract=off keeps the C code from fusing multiply-adds so the compiled
kernel stays bit-identical to the pure-Python one.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: compiled kernel skipped ({exc}); "
                  "falling back to pure Python", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: building {ext.name} failed ({exc}); "
                  "falling back to pure Python", file=sys.stderr)


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension

    if sys.platform == "win32":
        compile_args = []
    else:
        compile_args = ["-O2", "-ffp-contract=off"]
    ext = Extension(
        "stemma.kernels._native",
        ["src/stemma/kernels/_native.pyx"],
        extra_compile_args=compile_args,
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
