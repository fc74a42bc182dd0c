import os

from setuptools import Extension, setup

# The compiled kernel is an optional speedup: setting OCMSIM_PURE=1 (or a
# missing Cython) skips it and the engine falls back to the pure-Python twin.
ext_modules = []
if os.environ.get("OCMSIM_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "ocmsim.engine._kernel_cy",
                    ["src/ocmsim/engine/_kernel_cy.pyx"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
