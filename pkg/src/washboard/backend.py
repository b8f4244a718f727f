"""Integrator backend selection.

The compiled kernel is preferred when importable; the pure-Python twin
is the fallback.  Both produce byte-identical results, so the choice
only affects speed.  Override with WASHBOARD_BACKEND=c or
WASHBOARD_BACKEND=python.
"""

from __future__ import annotations

import os

from . import _pykernel

_requested = os.environ.get("WASHBOARD_BACKEND", "auto")

if _requested == "python":
    _impl = _pykernel
elif _requested == "c":
    from . import _ckernel as _impl
elif _requested == "auto":
    try:
        from . import _ckernel as _impl
    except ImportError:
        _impl = _pykernel
else:
    raise ValueError(
        f"WASHBOARD_BACKEND must be 'c', 'python', or 'auto', got {_requested!r}")

run_chunk = _impl.run_chunk
BACKEND_NAME = _impl.BACKEND_NAME


def available_backends():
    """Names of backends importable in this environment."""
    names = ["python"]
    try:
        from . import _ckernel  # noqa: F401
        names.insert(0, "c")
    except ImportError:
        pass
    return names


def get_backend(name: str):
    """Return the named kernel module (for benchmarks and tests)."""
    if name == "python":
        return _pykernel
    if name == "c":
        from . import _ckernel
        return _ckernel
    raise ValueError(f"unknown backend {name!r}")
