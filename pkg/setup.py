"""Build script: compiles the Cython kernel core when possible.

The package works without the extension (a pure-Python/numpy fallback is
selected at import time), so a failed compile downgrades to a warning
instead of aborting the install. Set CAKEGAME_SKIP_EXT=1 to skip the
extension build entirely.
"""

import os
import sys

from setuptools import Extension, setup


def extensions():
    if os.environ.get("CAKEGAME_SKIP_EXT"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        print(f"cakegame: Cython/numpy unavailable ({exc}); building pure-Python only",
              file=sys.stderr)
        return []
    ext = Extension(
        "cakegame._kernels_c",
        sources=["src/cakegame/_kernels_c.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": False,  # keep IEEE division semantics identical to CPython
        },
    )


setup(ext_modules=extensions())
