"""Build script: compiles the optional Cython assembly kernel.

The package works without the extension (a vectorized numpy kernel is
selected at import time), so a missing compiler or missing Cython only
costs speed, not functionality.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible, warn and continue otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        import warnings

        warnings.warn(
            f"could not build the compiled assembly kernel ({exc}); "
            "falling back to the pure-numpy kernel"
        )


ext_modules = []
cmdclass = {}
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "tmcopt._corekernel",
                ["src/tmcopt/_corekernel.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
    cmdclass["build_ext"] = optional_build_ext
except ImportError:
    pass

setup(ext_modules=ext_modules, cmdclass=cmdclass)
