from setuptools import Extension, setup
from Cython.Build import cythonize

# -ffp-contract=off: the pure-Python fallback must match the compiled core
# bit for bit, so fused multiply-adds are disabled.
setup(
    ext_modules=cythonize(
        [
            Extension(
                "moufang._jetcore",
                ["src/moufang/_jetcore.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
)
