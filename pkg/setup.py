"""Build script: compiles the optional Cython kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so a missing compiler or Cython only costs speed.
Set KLCELLS_NO_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import setup

PYX = "src/klcells/_kernel/_core.pyx"

ext_modules = []
if os.environ.get("KLCELLS_NO_EXT") != "1" and os.path.exists(PYX):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [PYX],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
