import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "detsieve._kernels._ckernels",
        ["src/detsieve/_kernels/_ckernels.pyx"],
        include_dirs=[numpy.get_include(), "src/detsieve/_kernels"],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}))
