"""Build script: compiles the optional fast-ops extension.

The extension is optional; if Cython or a C compiler is unavailable the
package installs anyway and falls back to the pure numpy implementation
(llogl._ops_py) at import time.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "llogl._ops",
                ["src/llogl/_ops.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": 3},
    )
except ImportError as exc:
    print(f"llogl: building without compiled extension ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
