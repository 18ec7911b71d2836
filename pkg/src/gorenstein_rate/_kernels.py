"""Gaussian elimination kernels over F_p.

Two interchangeable implementations of in-place row reduction live here: a
numba-compiled loop and a vectorised numpy fallback.  The backend is picked at
import time; set ``GORENSTEIN_RATE_NO_NUMBA=1`` to force the numpy path (useful
for debugging or when numba is unavailable).

Both kernels take an ``int64`` array whose entries lie in ``[0, p)`` and
return ``(rank, pivots)``.  Elimination is deterministic: the pivot for each
column is the first nonzero entry at or below the current row.
"""

import os

import numpy as np

try:
    import numba as nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    nb = None

_ENV_FLAG = "GORENSTEIN_RATE_NO_NUMBA"


def _numba_requested():
    return nb is not None and os.environ.get(_ENV_FLAG, "").strip().lower() not in {"1", "true", "yes", "on"}


def inverse_mod(a, p):
    return pow(int(a), -1, int(p))


def rref_inplace_numpy(A, p, reduced=True):
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        lead = int(A[r, c])
        if lead != 1:
            A[r] = A[r] * inverse_mod(lead, p) % p
        col = A[:, c].copy()
        col[r] = 0
        if not reduced:
            col[:r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return r, np.asarray(pivots, dtype=np.int64)


if nb is not None:

    @nb.njit(cache=True, nogil=True)
    def _inv_nb(a, p):
        # extended Euclid; a is nonzero mod p
        t, new_t = 0, 1
        r, new_r = p, a
        while new_r != 0:
            q = r // new_r
            t, new_t = new_t, t - q * new_t
            r, new_r = new_r, r - q * new_r
        if t < 0:
            t += p
        return t

    @nb.njit(cache=True, nogil=True)
    def rref_inplace_numba(A, p, reduced=True):
        rows, cols = A.shape
        pivots = np.empty(min(rows, cols), np.int64)
        support = np.empty(cols, np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if A[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for k in range(c, cols):
                    tmp = A[r, k]
                    A[r, k] = A[piv, k]
                    A[piv, k] = tmp
            inv = _inv_nb(A[r, c], p)
            nsup = 0
            for k in range(c, cols):
                if A[r, k] != 0:
                    if inv != 1:
                        A[r, k] = A[r, k] * inv % p
                    support[nsup] = k
                    nsup += 1
            start = 0 if reduced else r + 1
            for i in range(start, rows):
                if i == r:
                    continue
                f = A[i, c]
                if f == 0:
                    continue
                g = p - f
                for s in range(nsup):
                    k = support[s]
                    A[i, k] = (A[i, k] + g * A[r, k]) % p
            pivots[r] = c
            r += 1
        return r, pivots[:r].copy()

else:  # pragma: no cover
    rref_inplace_numba = None


USE_NUMBA = _numba_requested()


def rref_inplace(A, p, reduced=True):
    """Row-reduce ``A`` in place; dispatches to the active backend."""
    if A.shape[0] == 0 or A.shape[1] == 0:
        return 0, np.zeros(0, dtype=np.int64)
    if USE_NUMBA:
        rank, piv = rref_inplace_numba(A, np.int64(p), reduced)
        return int(rank), piv
    return rref_inplace_numpy(A, p, reduced)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
