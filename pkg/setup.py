"""Build script: compiles the optional mod-p rank kernel when Cython is present.

The package is pure Python; the extension only accelerates sparse rank
computations over prime fields.  If Cython or a C compiler is missing the
install proceeds without it and qhopf.kernels falls back to the pure-Python
implementation.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "qhopf._mod_rank",
                sources=["src/qhopf/_mod_rank.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
