"""Numerical backend selection.

Hot kernels (Prim MST, chaos-game iteration) exist in two variants: a
numba-compiled one and a pure-numpy one.  The env var ``DIMSCOPE_BACKEND``
picks the path: ``numba`` (default when numba imports), ``numpy`` forces
the fallback.  ``DIMSCOPE_THREADS`` caps numba worker threads.
"""

import os

_BACKEND_ENV = "DIMSCOPE_BACKEND"
_THREADS_ENV = "DIMSCOPE_THREADS"

try:
    import numba  # noqa: F401

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


def backend_name() -> str:
    """Return the active backend, 'numba' or 'numpy'."""
    choice = os.environ.get(_BACKEND_ENV, "auto").lower()
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not _HAVE_NUMBA:
            raise RuntimeError("DIMSCOPE_BACKEND=numba but numba is not installed")
        return "numba"
    return "numba" if _HAVE_NUMBA else "numpy"


def use_numba() -> bool:
    return backend_name() == "numba"


def default_threads() -> int | None:
    """Thread cap from DIMSCOPE_THREADS, or None for numba's default."""
    raw = os.environ.get(_THREADS_ENV)
    if raw is None:
        return None
    n = int(raw)
    if n < 1:
        raise ValueError(f"{_THREADS_ENV} must be >= 1, got {raw}")
    return n


def set_threads(n: int | None) -> None:
    """Cap numba threads; a no-op on the numpy backend."""
    if n is None or not _HAVE_NUMBA:
        return
    import numba

    numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
