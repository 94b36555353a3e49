import os

from setuptools import Extension, setup

# The compiled enumeration kernel is optional: when Cython (or a C compiler)
# is unavailable the package falls back to the pure-Python kernel at import.
ext_modules = []
if not os.environ.get("LATGEO_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "latgeo.kernels._speedups",
                    ["src/latgeo/kernels/_speedups.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
