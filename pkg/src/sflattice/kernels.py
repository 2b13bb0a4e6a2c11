"""Hot integer kernels: batch point location in simplices and vertex peeling.

Both kernels work on barycentric *numerators*.  A cell is stored as the
sign-normalized adjugate ``adj`` of its homogeneous vertex matrix
``H = [[w_0 ... w_d], [1 ... 1]]`` together with ``den = |det H|``; a point
``y`` of the dilate ``m * cell`` has barycentric coordinates
``adj @ (y, m) / den`` and lies in the dilate iff every numerator is >= 0.
All arithmetic is integral, so the int64 paths are exact as long as
:func:`fits_int64` holds; otherwise callers pass ``dtype=object`` arrays,
which only the numpy path accepts.

Backend selection: numba kernels are used when numba imports, unless the
environment variable ``SFLATTICE_BACKEND=numpy`` is set.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is optional
    njit = None

INT64_SAFE = 2**62

STATUS_OK = 0
STATUS_EMPTINESS_VIOLATED = 1


def _want_numba() -> bool:
    flag = os.environ.get("SFLATTICE_BACKEND", "numba").strip().lower()
    return njit is not None and flag != "numpy"


USE_NUMBA = _want_numba()


def fits_int64(*magnitudes: int) -> bool:
    bound = 1
    for m in magnitudes:
        bound *= max(int(m), 1)
    return bound < INT64_SAFE


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------- numpy path

def locate_cells_numpy(adj, Y, mass):
    """First cell (in order) whose ``mass``-dilate contains each row of ``Y``.

    Returns ``(idx, num)``; ``idx[p] == -1`` marks points outside every cell.
    """
    N = Y.shape[0]
    C, k, _ = adj.shape
    dtype = Y.dtype
    Yh = np.empty((N, k), dtype=dtype)
    Yh[:, : k - 1] = Y
    Yh[:, k - 1] = mass
    idx = np.full(N, -1, dtype=np.int64)
    num = np.zeros((N, k), dtype=dtype)
    todo = np.arange(N)
    for c in range(C):
        if todo.size == 0:
            break
        nc = Yh[todo] @ adj[c].T
        inside = np.all(nc >= 0, axis=1)
        hit = todo[inside]
        idx[hit] = c
        num[hit] = nc[inside]
        todo = todo[~inside]
    return idx, num


def peel_numpy(num, den, mass, target):
    """Apply ``mass - target`` peeling steps to every row of ``num``.

    Each step, at current mass ``mu``: if the non-basepoint numerators sum to
    at most ``(mu - 1) * den`` the basepoint (position 0) is removed,
    otherwise the first position ``i >= 1`` with numerator ``>= den`` is.
    In an empty simplex one of the two always applies.
    Returns ``(peeled positions, remaining numerators, status)``.
    """
    num = num.copy()
    N, k = num.shape
    steps = mass - target
    peeled = np.zeros((N, max(steps, 0)), dtype=np.int64)
    status = np.zeros(N, dtype=np.int8)
    rows = np.arange(N)
    for s in range(steps):
        mu = mass - s
        rest = num[:, 1:].sum(axis=1) if k > 1 else np.zeros(N, dtype=num.dtype)
        base = rest <= (mu - 1) * den
        if k > 1:
            big = num[:, 1:] >= den[:, None]
            has_big = big.any(axis=1)
            first = big.argmax(axis=1) + 1
        else:
            has_big = np.zeros(N, dtype=bool)
            first = np.zeros(N, dtype=np.int64)
        pos = np.where(base, 0, first)
        bad = ~base & ~has_big
        status[bad] = STATUS_EMPTINESS_VIOLATED
        pos[bad] = 0
        ok = ~bad & (status == STATUS_OK)
        num[rows[ok], pos[ok]] -= den[ok]
        peeled[:, s] = pos
    return peeled, num, status


# ---------------------------------------------------------------- numba path

if njit is not None:

    @njit(cache=True)
    def _locate_cells_nb(adj, Y, mass):
        N = Y.shape[0]
        C, k, _ = adj.shape
        idx = np.full(N, -1, dtype=np.int64)
        num = np.zeros((N, k), dtype=np.int64)
        row = np.empty(k, dtype=np.int64)
        for p in range(N):
            for c in range(C):
                inside = True
                for i in range(k):
                    acc = adj[c, i, k - 1] * mass
                    for j in range(k - 1):
                        acc += adj[c, i, j] * Y[p, j]
                    if acc < 0:
                        inside = False
                        break
                    row[i] = acc
                if inside:
                    idx[p] = c
                    for i in range(k):
                        num[p, i] = row[i]
                    break
        return idx, num

    @njit(cache=True)
    def _peel_nb(num, den, mass, target):
        N, k = num.shape
        steps = mass - target
        out = num.copy()
        peeled = np.zeros((N, max(steps, 0)), dtype=np.int64)
        status = np.zeros(N, dtype=np.int8)
        for p in range(N):
            D = den[p]
            for s in range(steps):
                mu = mass - s
                rest = 0
                for i in range(1, k):
                    rest += out[p, i]
                pos = -1
                if rest <= (mu - 1) * D:
                    pos = 0
                else:
                    for i in range(1, k):
                        if out[p, i] >= D:
                            pos = i
                            break
                if pos < 0:
                    status[p] = STATUS_EMPTINESS_VIOLATED
                    break
                out[p, pos] -= D
                peeled[p, s] = pos
        return peeled, out, status


def locate_cells_numba(adj, Y, mass):
    return _locate_cells_nb(np.ascontiguousarray(adj, dtype=np.int64),
                            np.ascontiguousarray(Y, dtype=np.int64), np.int64(mass))


def peel_numba(num, den, mass, target):
    return _peel_nb(np.ascontiguousarray(num, dtype=np.int64),
                    np.ascontiguousarray(den, dtype=np.int64), np.int64(mass), np.int64(target))


# ---------------------------------------------------------------- dispatch

def locate_cells(adj, Y, mass):
    if USE_NUMBA and Y.dtype != object and adj.dtype != object:
        return locate_cells_numba(adj, Y, mass)
    return locate_cells_numpy(adj, Y, mass)


def peel(num, den, mass, target):
    if USE_NUMBA and num.dtype != object and den.dtype != object:
        return peel_numba(num, den, mass, target)
    return peel_numpy(num, den, mass, target)
