"""Build script for the compiled theta core.

The package works without the extension (a numpy fallback is selected at
import time); building it just makes scalar genus-1 theta sums faster.
"""

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "rkhs_surface._theta_fast",
        ["src/rkhs_surface/_theta_fast.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}))
