"""Build script for the optional compiled scoring kernels.

The package works without the extension (a numpy fallback is selected at
import time), so a missing Cython toolchain downgrades the install instead
of breaking it. Set RAGKIT_PURE=1 to skip the extension on purpose.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("RAGKIT_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("ragkit.kernels._native", ["src/ragkit/kernels/_native.pyx"])],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
