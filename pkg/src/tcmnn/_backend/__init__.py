"""Backend selection for the hot numeric kernels.

Two interchangeable implementations exist: numba-compiled loops
(:mod:`._numba`) and pure numpy (:mod:`._numpy`).  The environment variable
``TCMNN_BACKEND`` picks one explicitly (``numba`` or ``numpy``); by default
the numba backend is used when numba imports cleanly, with numpy as the
fallback.  Both produce results that agree to floating-point noise; the test
suite and ``benchmarks/bench_backends.py`` exercise them against each other.
"""

from __future__ import annotations

import os

_active = None


def _load(name: str):
    if name == "numpy":
        from . import _numpy
        return _numpy
    if name == "numba":
        from . import _numba
        return _numba
    raise ValueError(f"unknown backend {name!r}; use 'numba' or 'numpy'")


def active():
    """The selected backend module (resolved once, then cached)."""
    global _active
    if _active is None:
        choice = os.environ.get("TCMNN_BACKEND", "").strip().lower()
        if choice:
            _active = _load(choice)
        else:
            try:
                _active = _load("numba")
            except ImportError:
                _active = _load("numpy")
    return _active


def use(name: str):
    """Force a backend (mainly for tests and benchmarks)."""
    global _active
    _active = _load(name)
    return _active
