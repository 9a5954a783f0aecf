"""Build script for the optional compiled pixel kernels.

The package works without the extension (a NumPy fallback is selected at
import time); building it just makes whole-image operations fast enough
for interactive use.
"""

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    kernels = Extension(
        "chromashift._kernels",
        sources=["src/chromashift/_kernels.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3", "-fopenmp"],
        extra_link_args=["-fopenmp"],
        optional=True,
    )
    ext_modules = cythonize([kernels], language_level="3")

setup(ext_modules=ext_modules)
