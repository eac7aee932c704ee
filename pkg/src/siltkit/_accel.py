"""Hot kernels for modular elimination.

Each kernel exists twice: a numba ``@njit`` loop version and a vectorised
pure-numpy version.  ``SILTKIT_NO_NUMBA=1`` (or a missing numba install)
selects the numpy path at import time; ``use_numba(False)`` switches at
runtime, which the benchmark and the cross-check tests rely on.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

_ENABLED = HAVE_NUMBA and os.environ.get("SILTKIT_NO_NUMBA", "") not in ("1", "true", "yes")


def use_numba(flag: bool) -> None:
    global _ENABLED
    _ENABLED = bool(flag) and HAVE_NUMBA


def numba_enabled() -> bool:
    return _ENABLED


# ---------------------------------------------------------------- numpy path

def _rref_numpy(M: np.ndarray, p: int) -> tuple[int, np.ndarray]:
    rows, cols = M.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r] = (M[r] * inv) % p
        col = M[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            M[hit] = (M[hit] - np.outer(col[hit], M[r]) % p) % p
        pivots[r] = c
        r += 1
    return r, pivots[:r].copy()


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True)
    def _powmod(a, e, p):
        result = 1
        a %= p
        while e > 0:
            if e & 1:
                result = (result * a) % p
            a = (a * a) % p
            e >>= 1
        return result

    @njit(cache=True)
    def _rref_numba(M, p):
        rows, cols = M.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if M[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    t = M[r, j]
                    M[r, j] = M[piv, j]
                    M[piv, j] = t
            inv = _powmod(M[r, c], p - 2, p)
            for j in range(c, cols):
                if M[r, j] != 0:
                    M[r, j] = (M[r, j] * inv) % p
            for i in range(rows):
                if i == r:
                    continue
                f = M[i, c]
                if f == 0:
                    continue
                for j in range(c, cols):
                    if M[r, j] != 0:
                        M[i, j] = (M[i, j] - f * M[r, j]) % p
            pivots[r] = c
            r += 1
        return r, pivots[:r].copy()


def rref_inplace(M: np.ndarray, p: int) -> tuple[int, np.ndarray]:
    """Reduce ``M`` (int64, entries in [0, p)) in place; return rank and pivot columns."""
    if M.size == 0:
        return 0, np.empty(0, dtype=np.int64)
    if _ENABLED:
        return _rref_numba(M, np.int64(p))
    return _rref_numpy(M, p)
