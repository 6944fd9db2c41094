"""Build script: compiles the optional Cython kernel core.

If Cython or a C compiler is unavailable the package still installs and
falls back to the pure-Python kernels at import time.
"""
import warnings

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("kgflow._kernels", ["src/kgflow/_kernels.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except Exception as exc:  # pragma: no cover - degraded build path
    warnings.warn(f"compiled kernels skipped ({exc}); pure-Python fallback will be used")

setup(ext_modules=ext_modules)
