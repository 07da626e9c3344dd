from setuptools import Extension, setup

import numpy as np

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "sspp._kernels._core",
                sources=["src/sspp/_kernels/_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    # Pure-python fallback kernels are used when the extension is unavailable.
    ext_modules = []

setup(ext_modules=ext_modules)
