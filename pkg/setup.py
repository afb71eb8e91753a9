"""Builds the optional compiled kernels.

The package is fully functional without the extension: voxmod._kernels
falls back to pure numpy/Python implementations at import time. The
extension only accelerates the two hot inner loops (decision-tree split
search and edit distance).
"""

import numpy
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Skip the extension (with a warning) if no C toolchain is available."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - depends on host toolchain
            print(f"warning: compiled kernels not built ({exc}); using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover
            print(f"warning: {ext.name} not built ({exc}); using pure-Python fallback")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:  # pragma: no cover
        return []
    return cythonize(
        [
            Extension(
                "voxmod._kernels._ckernels",
                ["src/voxmod/_kernels/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
