"""Build script: compiles the optional Cython kernel extension.

Set HETEROREP_NO_EXT=1 to skip compilation; the package then runs on the
pure-Python kernel fallbacks.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("HETEROREP_NO_EXT") != "1":
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "heterorep.kernels._ckernels",
                ["src/heterorep/kernels/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
