"""Build script: compiles the optional Cython scanner accelerator.

The package is fully functional without the extension; pkgperm.js.scanner
falls back to the pure-Python kernel when the compiled module is absent.
Build in place with:

    python setup.py build_ext --inplace
"""

import os

from setuptools import setup

_PYX = "src/pkgperm/js/_scanner_c.pyx"

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    if os.path.exists(_PYX):
        ext_modules = cythonize([_PYX], compiler_directives={"language_level": "3"})
    else:
        ext_modules = []

setup(ext_modules=ext_modules)
