"""Build the optional compiled kernel core.

The package works without it (a numpy fallback is selected at import);
building it speeds up the banded-attention, convolution and normalization
hot loops.  `pip install -e . --no-build-isolation` compiles it in place.
"""

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "attnprof.backend._core",
                sources=["src/attnprof/backend/_core.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3", "-ffast-math"],
                # -ffast-math lets gcc emit libmvec vector math calls
                libraries=["mvec", "m"],
            )
        ],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
