"""Build script: compiles the optional fast clustering kernels.

The package works without the extension (a pure-numpy fallback is selected
at import time), so any failure to compile is downgraded to a warning.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that tolerates a missing compiler toolchain."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._skip(exc)

    @staticmethod
    def _skip(exc):
        print(
            f"warning: could not build soundtex._kernels ({exc}); "
            "falling back to the pure-Python kernels",
            file=sys.stderr,
        )


def _extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        OptionalBuildExt._skip(exc)
        return []
    return cythonize(
        [
            Extension(
                "soundtex._kernels",
                ["src/soundtex/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )


setup(ext_modules=_extensions(), cmdclass={"build_ext": OptionalBuildExt})
