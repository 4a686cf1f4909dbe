"""Build script: compiles the optional kernel extension when Cython and a C
toolchain are available; the package falls back to the pure-Python kernels
otherwise, so a failed extension build is not fatal.
"""
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/strata/_kernels/_ckern.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
