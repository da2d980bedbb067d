"""Build the optional compiled search kernel.

If Cython or a C compiler is missing the package still installs and the
pure-Python kernel is used.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("LAYERFORGE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "layerforge.solver._csearch",
                    ["src/layerforge/solver/_csearch.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
