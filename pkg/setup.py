"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a vectorized NumPy
fallback is selected at import time), so a failed compile downgrades to a
warning instead of aborting the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "lasuscc.kernels._core",
                sources=["src/lasuscc/kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - degraded-build path
    print(f"warning: Cython kernel extension will not be built ({exc}); "
          "the pure NumPy backend will be used", file=sys.stderr)
    ext_modules = []

setup(ext_modules=ext_modules)
