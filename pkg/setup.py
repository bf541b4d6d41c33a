"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-NumPy fallback is selected at
import time), so any failure to cythonize or compile downgrades to a pure
Python build instead of aborting the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext = Extension(
        "canonham._kernels",
        ["src/canonham/_kernels.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    ext_modules = cythonize([ext], language_level="3")
except Exception as exc:  # pragma: no cover - depends on build environment
    sys.stderr.write(
        "canonham: Cython unavailable (%s); building without compiled kernels\n" % exc
    )

setup(ext_modules=ext_modules)
