"""Builds the _npqc extension through the project's CMake tree."""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).parent.resolve()
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        subprocess.run(
            [
                "cmake",
                "-S", str(source_dir),
                "-B", str(build_dir),
                "-DNPQC_BUILD_PYTHON=ON",
                "-DCMAKE_BUILD_TYPE=Release",
                f"-DPython_EXECUTABLE={sys.executable}",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_npqc", "-j"],
            check=True,
        )

        built = sorted(build_dir.glob("_npqc*.so")) + sorted(build_dir.glob("_npqc*.pyd"))
        if not built:
            raise RuntimeError("cmake did not produce the _npqc extension")
        dest = Path(self.get_ext_fullpath(ext.name)).resolve()
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built[0], dest)
        # keep a copy next to the sources so editable installs resolve it
        shutil.copy2(built[0], source_dir / "python" / "npqc" / built[0].name)


setup(
    ext_modules=[CMakeExtension("npqc._npqc")],
    cmdclass={"build_ext": CMakeBuild},
)
