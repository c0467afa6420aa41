"""Make the build tree importable when pytest is invoked by hand.

Under ctest the staged package is supplied through PYTHONPATH; for a manual
``pytest python/tests`` run, fall back to the conventional build directory
at the repository root.
"""

import pathlib
import sys

try:
    import orbifoldkit  # noqa: F401
except ImportError:
    _staged = pathlib.Path(__file__).resolve().parents[2] / "build" / "python"
    sys.path.insert(0, str(_staged))
