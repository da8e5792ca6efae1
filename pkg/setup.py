from setuptools import setup, Extension
from Cython.Build import cythonize

# -ffp-contract=off keeps the compiled kernels bit-identical to the pure
# Python fallback (no FMA contraction of a*b+c); -fno-builtin-sincos stops
# GCC from fusing adjacent sin/cos calls into glibc sincos, which rounds
# differently in the last ulp.
ext_modules = [
    Extension(
        "cusplevy._kernels",
        ["src/cusplevy/_kernels.pyx"],
        extra_compile_args=["-O2", "-ffp-contract=off",
                            "-fno-builtin-sin", "-fno-builtin-cos", "-fno-builtin-sincos"],
    )
]

setup(ext_modules=cythonize(ext_modules, language_level="3"))
