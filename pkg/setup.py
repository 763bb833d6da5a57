"""Build the optional Cython kernel; the package still installs without it."""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("WAVEFD_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "wavefd._kernels",
                    ["src/wavefd/_kernels.pyx"],
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
