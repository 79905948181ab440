import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# The compiled mask-walk kernel is optional: without Cython (or with
# KLPOLY_PURE set) the package installs with the pure-Python fallback.
ext_modules = []
if cythonize is not None and not os.environ.get("KLPOLY_PURE"):
    ext_modules = cythonize(
        [Extension("klpoly._cellwalk", ["src/klpoly/_cellwalk.pyx"])],
        language_level="3",
    )

setup(ext_modules=ext_modules)
