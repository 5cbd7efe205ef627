"""Build script: compiles the optional GF(2) reduction kernel.

The package works without it; a failed or skipped build leaves the
pure-Python kernel in place. Pass ``--skip-cython`` or set
``A4CREPANT_NO_EXT=1`` to skip compilation.
"""
import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

use_cython = os.environ.get("A4CREPANT_NO_EXT", "") in ("", "0")
if "--skip-cython" in sys.argv:
    use_cython = False
    sys.argv.remove("--skip-cython")


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: compiled kernel not built ({exc}); using pure Python")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: failed to build {ext.name} ({exc}); using pure Python")


ext_modules = []
if use_cython:
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available; using pure Python kernel")
    else:
        ext_modules = cythonize(
            [Extension("a4crepant._kernel", ["src/a4crepant/_kernel.pyx"],
                       extra_compile_args=["-O3"], language="c++")],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
