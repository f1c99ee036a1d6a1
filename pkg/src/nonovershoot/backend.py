"""Backend selection for the hot Monte Carlo kernels.

Two implementations of every kernel exist: a numba ``@njit`` version and a
vectorized pure-numpy fallback.  Both consume the same counter-based random
streams, so they agree to floating-point rounding.  Selection order:

1. ``NONOVERSHOOT_BACKEND=numpy`` or ``=numba`` in the environment wins.
2. Otherwise numba is used when it imports, numpy when it does not.

``set_num_threads`` caps numba's thread pool; the numpy path is single
threaded and ignores it.  Results never depend on the thread count: replicas
write to disjoint slots and reductions run in index order afterwards.
"""

import os

_ENV_VAR = "NONOVERSHOOT_BACKEND"

try:
    import numba  # noqa: F401

    _HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAS_NUMBA = False


def has_numba() -> bool:
    return _HAS_NUMBA


def _resolve() -> str:
    env = os.environ.get(_ENV_VAR, "").strip().lower()
    if env in ("numpy", "numba"):
        if env == "numba" and not _HAS_NUMBA:
            raise RuntimeError(f"{_ENV_VAR}=numba requested but numba is not importable")
        return env
    return "numba" if _HAS_NUMBA else "numpy"


_ACTIVE = _resolve()


def active_backend() -> str:
    """Currently selected kernel backend, 'numba' or 'numpy'."""
    return _ACTIVE


def set_backend(name: str) -> None:
    """Override the backend programmatically (used by tests and benchmarks)."""
    global _ACTIVE
    if name not in ("numpy", "numba"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not _HAS_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    _ACTIVE = name


def set_num_threads(n: int) -> None:
    """Cap worker parallelism for the numba backend."""
    if n < 1:
        raise ValueError("thread count must be >= 1")
    if _HAS_NUMBA:
        import numba

        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
