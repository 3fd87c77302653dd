import os

import numpy as np
from setuptools import Extension, setup

# MCTREE_NO_EXT=1 installs the pure numpy backend only.
ext_modules = []
if not os.environ.get("MCTREE_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "mctree._kernels",
                    ["src/mctree/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    # keep float evaluation order identical to the numpy fallback
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
