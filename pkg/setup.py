import numpy
from setuptools import setup
from setuptools.extension import Extension

# The compiled kernel is an optional speedup; the package falls back to the
# numpy implementation at import time if the extension is missing.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "pyrotopo._kernel.fire_cy",
                ["src/pyrotopo/_kernel/fire_cy.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
