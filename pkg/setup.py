"""Build script.

Compiles the optional fast deletion-chain kernels when Cython is available;
otherwise the package installs pure Python and the numpy fallback is used.
"""

from setuptools import Extension, setup


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension("magkit._kernels_cy", ["src/magkit/_kernels_cy.pyx"])
    return cythonize(ext, language_level="3")


setup(ext_modules=extensions())
