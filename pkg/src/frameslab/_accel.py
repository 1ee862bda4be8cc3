"""Backend switch for the compiled kernels.

Set ``FRAMESLAB_BACKEND=numpy`` to force the vectorised numpy paths; the
default is ``numba`` when numba imports cleanly.
"""
from __future__ import annotations

import contextlib
import os

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is an optional accelerator
    _numba = None

HAS_NUMBA = _numba is not None

_requested = os.environ.get("FRAMESLAB_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ValueError(f"FRAMESLAB_BACKEND must be 'numba' or 'numpy', got {_requested!r}")
_backend = "numba" if (_requested == "numba" and HAS_NUMBA) else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    kwargs.setdefault("cache", True)
    if HAS_NUMBA:
        return _numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda f: f


def backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba is not installed")
    _backend = name


@contextlib.contextmanager
def use_backend(name: str):
    previous = _backend
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def set_threads(n: int | None) -> None:
    """Apply a thread cap to numba's pool (no-op without numba)."""
    if n is None or not HAS_NUMBA:
        return
    n = max(1, min(int(n), _numba.config.NUMBA_NUM_THREADS))
    _numba.set_num_threads(n)
