import numpy as np
from setuptools import Extension, setup

# The compiled kernels are an optional speedup: narxiv falls back to the
# pure-numpy backend when the extension is missing.  No -ffast-math and no
# fp contraction: the kernels rely on strict IEEE-754 semantics.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "narxiv._kernels",
                ["src/narxiv/_kernels.pyx"],
                include_dirs=[np.get_include()],
                libraries=["m"],
                extra_compile_args=["-O3", "-ffp-contract=off", "-fno-fast-math"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
