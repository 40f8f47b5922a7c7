"""Kernel backend selection.

The hot loops (exhaustive scan, annealing sweeps) exist twice: jitted
with numba and as plain numpy.  The QUBOGATES_BACKEND environment
variable picks one: "numba", "numpy", or "auto" (the default, numba
when it imports, numpy otherwise).  Both backends return the same
exhaustive results; annealing streams differ per backend but each is
deterministic for a given seed.
"""

from __future__ import annotations

import os

from . import _kernels_numpy

_ENV = "QUBOGATES_BACKEND"


def _numba_module():
    from . import _kernels_numba

    return _kernels_numba


def active_backend() -> str:
    """Resolve the backend name the next kernel call will use."""
    choice = os.environ.get(_ENV, "auto").strip().lower()
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        return "numba"
    if choice not in ("", "auto"):
        raise ValueError(f"{_ENV} must be auto, numba, or numpy, not {choice!r}")
    try:
        _numba_module()
    except ImportError:
        return "numpy"
    return "numba"


def kernels():
    """The kernel module for the active backend."""
    if active_backend() == "numba":
        return _numba_module()
    return _kernels_numpy
