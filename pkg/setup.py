"""Build script: compiles the optional Cayley-Dickson kernel when Cython is present.

The package works without the extension (a numpy fallback is selected at
import time), so a missing compiler or Cython is not fatal.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "focalkit._cdnative",
                ["src/focalkit/_cdnative.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
            "cdivision": True,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
