"""Build script: compiles the optional fast Smith-reduction kernel.

The package is pure Python plus one optional Cython extension
(``pdce._snf_c``).  If Cython or a C compiler is unavailable the build
falls through to the pure-Python kernel (``pdce._snf_py``) — same
algorithm, arbitrary precision, selected automatically at import.

    python setup.py build_ext --inplace    # rebuild the extension in place
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/pdce/_snf_c.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    print("warning: Cython not available, building without the compiled kernel")

setup(ext_modules=ext_modules)
