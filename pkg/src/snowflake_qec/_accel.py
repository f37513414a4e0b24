"""Backend selection for the hot kernels.

Set ``SNOWFLAKE_QEC_BACKEND=numpy`` to run the vectorised numpy/scipy path
instead of the numba-compiled loops. Both paths implement identical
semantics and are cross-checked in the test-suite.
"""

import os

BACKEND_ENV = "SNOWFLAKE_QEC_BACKEND"
BACKENDS = ("numba", "numpy")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def default_backend():
    name = os.environ.get(BACKEND_ENV, "numba").strip().lower()
    if name not in BACKENDS:
        raise ValueError(f"{BACKEND_ENV} must be one of {BACKENDS}, got {name!r}")
    if name == "numba" and numba is None:
        return "numpy"
    return name


def resolve_backend(backend=None):
    if backend is None:
        return default_backend()
    if backend not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}, got {backend!r}")
    return backend


def njit(*args, **kwargs):
    """``numba.njit`` with on-disk caching; identity when numba is missing."""
    kwargs.setdefault("cache", True)
    if numba is None:
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn
    return numba.njit(*args, **kwargs)
