"""Build script: compiles the tridiagonal eigensolver kernel when a C toolchain
is available.  The package falls back to the pure-Python kernel at import time
if the extension is missing, so a failed build is not fatal."""

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "jacobispec._tridiag",
                ["src/jacobispec/_tridiag.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
