"""Build script for the optional compiled neighbor-search kernels.

The package is fully functional without the extension: ``likenessrisk.geometry``
falls back to NumPy implementations of the same kernels at import time. The
build therefore tolerates a missing compiler or Cython and installs the pure
Python package instead of failing.
"""

import os

from setuptools import setup

ext_modules = []
cmdclass = {}

if os.environ.get("LIKENESSRISK_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
        from setuptools.command.build_ext import build_ext

        class optional_build_ext(build_ext):
            """Swallow compiler failures so the pure-Python install succeeds."""

            def run(self):
                try:
                    super().run()
                except Exception as exc:  # noqa: BLE001 - any toolchain failure
                    print(f"likenessrisk: skipping compiled kernels ({exc})")

            def build_extension(self, ext):
                try:
                    super().build_extension(ext)
                except Exception as exc:  # noqa: BLE001
                    print(f"likenessrisk: skipping {ext.name} ({exc})")

        ext_modules = cythonize(
            [
                Extension(
                    "likenessrisk.geometry._kernels",
                    ["src/likenessrisk/geometry/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
        cmdclass["build_ext"] = optional_build_ext
    except ImportError as exc:
        print(f"likenessrisk: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules, cmdclass=cmdclass)
