"""Build script: compiles the optional root-solver extension when a C
toolchain is present; the package falls back to the numpy kernel otherwise."""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "rootreg._aberth",
                ["src/rootreg/_aberth.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": 3},
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
