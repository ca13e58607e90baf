"""Builds the optional Cython kernel.

The package is fully functional without it: `wiredor.kernels` falls back to
the vectorized numpy implementation when the extension is missing.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("wiredor.kernels._orkern", ["src/wiredor/kernels/_orkern.pyx"])],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
