"""Build script for the optional compiled convolution kernel.

The package works without the extension (a NumPy fallback is selected at
import time); building it just makes model forward passes faster.
Set SPOOFKIT_NO_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible, otherwise install pure Python."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"spoofkit: skipping compiled kernel ({exc!r}); "
                  "the NumPy fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"spoofkit: failed to build {ext.name} ({exc!r}); "
                  "the NumPy fallback will be used")


if os.environ.get("SPOOFKIT_NO_EXT"):
    ext_modules = []
    cmdclass = {}
else:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension(
            "spoofkit.nn._convkernel",
            ["src/spoofkit/nn/_convkernel.pyx"],
            extra_compile_args=["-O3"],
        )],
        language_level="3",
    )
    cmdclass = {"build_ext": optional_build_ext}

setup(ext_modules=ext_modules, cmdclass=cmdclass)
