import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "pppcontract._core._mc",
                ["src/pppcontract/_core/_mc.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Pure-python fallback is selected at import time; the wheel still works.
    ext_modules = []

setup(ext_modules=ext_modules)
