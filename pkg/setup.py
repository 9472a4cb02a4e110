from setuptools import Extension, setup
from Cython.Build import cythonize

# -ffp-contract=off keeps the compiled kernels bit-identical to the pure-Python
# fallback (no FMA contraction); do not add -ffast-math for the same reason.
extensions = [
    Extension(
        "mdpsweep.kernels._csweeps",
        ["src/mdpsweep/kernels/_csweeps.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

ext_modules = cythonize(extensions, compiler_directives={"language_level": "3"})
for ext in ext_modules:
    # cythonize rebuilds the Extension objects and loses this flag; a failed
    # compile must not fail the install, since the package falls back to the
    # pure-Python kernels at import
    ext.optional = True

setup(ext_modules=ext_modules)
