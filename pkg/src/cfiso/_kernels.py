"""Inner loops for long-stream simulation.

The deviation walk has a sequential dependence (each step looks at the sign
of the previous deviation), so it gets a compiled kernel; everything else in
the Monte Carlo path is plain numpy.  The python fallback is kept importable
and is cross-tested against the compiled version.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


def _deviation_walk_py(nonzero: np.ndarray) -> np.ndarray:
    n = nonzero.shape[0]
    m = np.empty(n + 1, dtype=np.int64)
    m[0] = 0
    cur = 0
    for t in range(n):
        if nonzero[t] and cur <= 0:
            cur = 1 - cur
        else:
            cur -= 1
        m[t + 1] = cur
    return m


_deviation_walk_nb = njit(cache=True)(_deviation_walk_py) if HAVE_NUMBA else None


def deviation_walk(nonzero: np.ndarray) -> np.ndarray:
    """m-walk over a stream's nonzero mask: reflect at or below zero on a
    nonzero symbol, otherwise drop by one.  Returns m(0..n)."""
    mask = np.ascontiguousarray(nonzero, dtype=np.bool_)
    if _deviation_walk_nb is not None:
        return _deviation_walk_nb(mask)
    return _deviation_walk_py(mask)


def running_longest_zero_run(nonzero: np.ndarray) -> np.ndarray:
    """Z(t) for t=1..n: longest run of zero symbols within the first t,
    counting a still-open run.  Vectorized; no kernel needed."""
    mask = np.asarray(nonzero, dtype=bool)
    n = mask.shape[0]
    idx = np.arange(1, n + 1, dtype=np.int64)
    last_nonzero = np.maximum.accumulate(np.where(mask, idx, 0))
    return np.maximum.accumulate(idx - last_nonzero)


def warmup() -> None:
    """Force jit compilation outside of timed sections."""
    deviation_walk(np.array([True, False, True], dtype=np.bool_))
