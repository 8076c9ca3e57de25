import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

ext = Extension("varsel._kernels", ["src/varsel/_kernels.pyx"], include_dirs=[numpy.get_include()])

setup(ext_modules=cythonize([ext], language_level=3))
