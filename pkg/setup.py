from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/qentwine/_kernel/_poly_cy.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception:
    # the pure-Python kernel is a complete fallback
    pass

setup(ext_modules=ext_modules)
