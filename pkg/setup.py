import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CHRONO_SQUID_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "chrono_squid.lattice_sim._kernel",
                    ["src/chrono_squid/lattice_sim/_kernel.pyx"],
                    # No fast-math or FMA contraction: the fallback must match bit for bit.
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
