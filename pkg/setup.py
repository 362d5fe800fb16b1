from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "doublecover._core._gridpath",
                ["src/doublecover/_core/_gridpath.pyx"],
                include_dirs=[np.get_include()],
            )
        ],
        language_level=3,
    )
except ImportError:
    # Without Cython the package still works through the pure-Python kernel.
    ext_modules = None

setup(ext_modules=ext_modules)
