"""CMake-driven build of the treeshift._core extension."""

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
        out_dir = Path(self.get_ext_fullpath(ext.name)).parent.resolve()
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)
        source_dir = Path(__file__).parent.resolve()
        subprocess.run(
            [
                "cmake",
                "-S", str(source_dir),
                "-B", str(build_dir),
                "-DSKBUILD=ON",  # core library + bindings only
                f"-DPython3_EXECUTABLE={sys.executable}",
                "-DCMAKE_BUILD_TYPE=Release",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_core", "-j2"],
            check=True,
        )
        out_dir.mkdir(parents=True, exist_ok=True)
        for lib in (build_dir / "python_pkg" / "treeshift").glob("_core*"):
            self.copy_file(str(lib), str(out_dir / lib.name))


setup(
    ext_modules=[CMakeExtension("treeshift._core")],
    cmdclass={"build_ext": CMakeBuild},
)
