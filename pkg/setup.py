"""Build script: compiles the optional exact-simplex extension.

The package is fully functional without the extension (a pure-Python kernel
with identical semantics is selected at import time), so the extension is
marked optional and any compilation failure degrades to the fallback.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext = Extension(
        "noarb._simplex_cy",
        sources=["src/noarb/_simplex_cy.pyx"],
        extra_compile_args=["-O2"],
        optional=True,
    )
    ext_modules = cythonize([ext], language_level="3")

setup(ext_modules=ext_modules)
