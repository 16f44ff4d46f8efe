"""Build script: compiles the optional reduction core.

The extension is marked optional; a failed build falls back to the
pure-Python engine selected at import time in funrips.modalg.backend.
"""

from setuptools import Extension, setup

ext = Extension(
    "funrips.modalg._core",
    ["src/funrips/modalg/_core.pyx"],
    extra_compile_args=["-O3"],
)
ext.optional = True

try:
    from Cython.Build import cythonize

    ext_modules = cythonize([ext], language_level="3")
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
