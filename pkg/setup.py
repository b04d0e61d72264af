"""Build the optional Cython Monte Carlo kernel.

The package works without it; ``cvftsim.kernels`` falls back to the numpy
implementation when the extension is not importable.
"""
from setuptools import setup

try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:  # pure-Python install
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "cvftsim._mckernel",
                ["src/cvftsim/_mckernel.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
