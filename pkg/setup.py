"""Build hook for the optional compiled kernel extension.

The package is fully functional without the extension: ``slsys.backend``
falls back to the pure-Python kernels when ``slsys._core`` cannot be built
or imported.  Set SLSYS_NO_EXT=1 to skip compilation entirely.
"""

import os
import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Never fail the install because a compiler or Cython is missing."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            warnings.warn(f"skipping compiled kernels ({exc}); using the pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            warnings.warn(f"failed to build {ext.name} ({exc}); using the pure-Python fallback")


extensions = []
cmdclass = {}
if os.environ.get("SLSYS_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        extensions = cythonize(
            [Extension("slsys._core", ["src/slsys/_core.pyx"], extra_compile_args=["-O3"])],
            language_level=3,
        )
        cmdclass["build_ext"] = optional_build_ext
    except ImportError:
        warnings.warn("Cython not available; installing with pure-Python kernels only")

setup(ext_modules=extensions, cmdclass=cmdclass)
