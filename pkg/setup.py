"""Build script for the optional compiled echo-synthesis kernel.

The extension is marked optional: if no C compiler (or Cython) is available
the install still succeeds and the package falls back to the pure-numpy
kernel at import time (see twmd._backend).
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "twmd._kernels",
                ["src/twmd/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
