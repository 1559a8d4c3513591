"""Build script for the optional compiled distance kernel.

The package works without the extension: citeflow.geo falls back to a
pure-Python haversine at import time if the compiled module is missing.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/citeflow/_distkernel.pyx"],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
