"""Build script for the optional compiled integrator kernel.

The package is fully functional without the extension (a pure-Python
kernel with identical arithmetic is selected at import time), so the
extension is marked optional: a missing compiler degrades the install
to the slow backend instead of failing it.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext = Extension(
        "washboard._ckernel",
        ["src/washboard/_ckernel.pyx"],
        extra_compile_args=[
            "-O3",
            "-march=native",
            "-ffp-contract=off",
            "-fno-math-errno",
        ],
    )
    ext.optional = True
    ext_modules = cythonize([ext], language_level="3")

setup(ext_modules=ext_modules)
