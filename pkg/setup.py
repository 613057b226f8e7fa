from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(["src/adict/_sparse_c.pyx"], language_level=3, quiet=True)
except ImportError:  # the pure-Python kernels are used instead
    ext_modules = []

setup(ext_modules=ext_modules)
