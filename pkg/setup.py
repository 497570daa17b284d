"""Build script: compiles the optional Cython kernel extension.

Set POWSEC_NO_EXT=1 to skip the extension and install the pure-Python
package (the NumPy fallback kernels are selected automatically at import).
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("POWSEC_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "powsec._kernels._core",
                    ["src/powsec/_kernels/_core.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
