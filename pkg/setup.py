"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-Python fallback is selected
at import time), so a failed compile only costs speed.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/stepfreeze/_kernels/_native.pyx",
        compiler_directives={"language_level": "3"},
    )
    include_dirs = [numpy.get_include()]
except ImportError:
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
