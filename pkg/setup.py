from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # build without the compiled kernels; the pure-Python integrator is used
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "euclidres._kernels",
                ["src/euclidres/_kernels.pyx"],
                extra_compile_args=["-O3"],
                language="c",
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
