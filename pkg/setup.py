import os

from setuptools import Extension, setup

# The compiled group-arithmetic kernel is optional: primematch.algebra falls
# back to the pure-Python backend when the extension is absent. Set
# PRIMEMATCH_SKIP_EXT=1 to install without a C compiler.
ext_modules = []
if os.environ.get("PRIMEMATCH_SKIP_EXT") != "1":
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "primematch.algebra._core",
                ["src/primematch/algebra/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
