"""Build the optional compiled portrait kernel.

The package runs without it; ``treeverb._backend`` falls back to the
pure-Python kernel when the extension is missing.
"""
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    pass
else:
    ext_modules = cythonize(
        [Extension("treeverb._kernel", ["src/treeverb/_kernel.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
