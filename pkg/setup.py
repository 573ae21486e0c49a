"""Builds the optional compiled kernels; the package works without them."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("DIFFCOH_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("diffcoh._kernels", ["src/diffcoh/_kernels.pyx"], language="c++", extra_compile_args=["-O2", "-std=c++17"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
