import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """A failed compile leaves the numpy fallback in charge."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: compiled kernel not built ({exc}); using numpy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); using numpy fallback")


extensions = []
if os.environ.get("RENDEZVOUS_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        extra = ["/O2"] if os.name == "nt" else ["-O3"]
        extensions = cythonize(
            [Extension("rendezvous._kernels", ["src/rendezvous/_kernels.pyx"], extra_compile_args=extra)],
            language_level="3",
        )

setup(ext_modules=extensions, cmdclass={"build_ext": optional_build_ext})
