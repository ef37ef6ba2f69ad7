"""Build script for the optional compiled kernels.

The package is pure Python plus one Cython extension (pzf._kernels) holding
the two hot loops: reachable-state closure and Monte Carlo propagation.  The
extension is marked optional so that a missing compiler degrades the install
to the pure-Python fallback instead of failing it.
"""

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "pzf._kernels",
                ["src/pzf/_kernels.pyx"],
                include_dirs=[np.get_include()],
                language="c++",
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
