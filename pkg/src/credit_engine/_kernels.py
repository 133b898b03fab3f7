"""Inner loops of the effort simulator.

Each kernel has a pure-numpy implementation and, when numba imports, an
``@njit`` twin. The active backend is chosen once at import time; set
``CREDIT_ENGINE_NUMBA=0`` to force numpy. Both implementations stay
importable (``*_numpy`` / ``*_numba``) so they can be tested and
benchmarked against each other.

Kernels take a block of raw uniforms on [0, 1) of shape (m, n) and return
``(totals, author_sums)``: the aggregate effort of every kept row and the
per-position effort sums over those rows. Efforts are in units of the
per-author cap ``c``; callers multiply by ``c``.
"""

from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("CREDIT_ENGINE_NUMBA", "1").strip().lower()
_WANT_NUMBA = _flag not in ("0", "false", "no", "off")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

JIT_OPTIONS = {"nogil": True, "cache": True, "fastmath": False}


def simplex_block_numpy(x: np.ndarray):
    # Spacings of n sorted uniforms are uniform on {u >= 0, sum(u) <= 1};
    # e = 1 - u maps that simplex onto {e in [0,1]^n, sum(e) >= n-1}.
    s = np.sort(x, axis=1)
    u = np.diff(s, axis=1, prepend=0.0)
    e = 1.0 - u
    return e.sum(axis=1), e.sum(axis=0)


def rejection_block_numpy(x: np.ndarray, threshold: float):
    totals = x.sum(axis=1)
    keep = totals >= threshold
    return totals[keep], x[keep].sum(axis=0)


# Above this row length numpy's vectorised sort beats the jitted loop.
_INSERTION_MAX = 24


def _simplex_block_py(x):
    m, n = x.shape
    totals = np.empty(m)
    author_sums = np.zeros(n)
    row = np.empty(n)
    for r in range(m):
        if n <= _INSERTION_MAX:
            for j in range(n):
                v = x[r, j]
                k = j
                while k > 0 and row[k - 1] > v:
                    row[k] = row[k - 1]
                    k -= 1
                row[k] = v
        else:
            for j in range(n):
                row[j] = x[r, j]
            row.sort()
        prev = 0.0
        t = 0.0
        for j in range(n):
            e = 1.0 - (row[j] - prev)
            prev = row[j]
            author_sums[j] += e
            t += e
        totals[r] = t
    return totals, author_sums


def _rejection_block_py(x, threshold):
    m, n = x.shape
    totals = np.empty(m)
    author_sums = np.zeros(n)
    k = 0
    for r in range(m):
        t = 0.0
        for j in range(n):
            t += x[r, j]
        if t >= threshold:
            for j in range(n):
                author_sums[j] += x[r, j]
            totals[k] = t
            k += 1
    return totals[:k].copy(), author_sums


if HAVE_NUMBA:
    simplex_block_numba = numba.njit(**JIT_OPTIONS)(_simplex_block_py)
    rejection_block_numba = numba.njit(**JIT_OPTIONS)(_rejection_block_py)
else:  # pragma: no cover
    simplex_block_numba = None
    rejection_block_numba = None

USING_NUMBA = HAVE_NUMBA and _WANT_NUMBA
BACKEND = "numba" if USING_NUMBA else "numpy"

if USING_NUMBA:

    def simplex_block(x):
        if x.shape[1] <= _INSERTION_MAX:
            return simplex_block_numba(x)
        return simplex_block_numpy(x)

    rejection_block = rejection_block_numba
else:
    simplex_block = simplex_block_numpy
    rejection_block = rejection_block_numpy
