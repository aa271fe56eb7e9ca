"""Build script for the optional compiled decision kernels.

The package works without the extension (a pure-numpy fallback is selected
at import time), so a failed compile only costs speed.
"""

import sys

from setuptools import Extension, setup


def ext_modules():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        print("cython/numpy not available at build time; "
              "skipping compiled kernels", file=sys.stderr)
        return []
    ext = Extension(
        "pttb._kernels_c",
        sources=["src/pttb/_kernels_c.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=ext_modules())
