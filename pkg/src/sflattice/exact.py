"""Exact integer and rational linear algebra.

Everything here works on plain Python ``int`` and :class:`fractions.Fraction`
values held in nested sequences, so there is no overflow and no rounding.
Matrices are row-major sequences of rows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

Rat = Fraction
IntMatrix = Sequence[Sequence[int]]


class DimensionMismatch(ValueError):
    pass


class UnderdeterminedSystem(ValueError):
    """Raised by :func:`rat_solve` when the system is consistent but has
    infinitely many solutions."""


def _shape(M) -> tuple[int, int]:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    for row in M:
        if len(row) != cols:
            raise DimensionMismatch("matrix is not rectangular")
    return rows, cols


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M) -> list[list]:
    return [list(col) for col in zip(*M)]


def mat_vec(M, v) -> list:
    return [sum(a * b for a, b in zip(row, v)) for row in M]


def mat_mul(A, B) -> list[list]:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def int_det(M: IntMatrix) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    rows, cols = _shape(M)
    if rows != cols:
        raise DimensionMismatch(f"determinant of a {rows}x{cols} matrix")
    n = rows
    if n == 0:
        return 1
    A = [list(map(int, row)) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
        prev = pivot
    return sign * A[n - 1][n - 1]


def int_adjugate(M: IntMatrix) -> tuple[int, list[list[int]]]:
    """Return ``(det, adj)`` with ``M @ adj == det * I``.

    Uses fraction-free Gauss-Jordan elimination on ``[M | I]``; every
    intermediate entry is a minor of the augmented matrix, so all divisions
    are exact.  Raises ``ZeroDivisionError`` for singular input.
    """
    rows, cols = _shape(M)
    if rows != cols:
        raise DimensionMismatch(f"adjugate of a {rows}x{cols} matrix")
    n = rows
    A = [list(map(int, row)) + [int(i == j) for j in range(n)] for i, row in enumerate(M)]
    swaps = 0
    prev = 1
    for k in range(n):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    swaps += 1
                    break
            else:
                raise ZeroDivisionError("singular matrix has no inverse")
        pivot = A[k][k]
        row_k = A[k]
        for i in range(n):
            if i == k:
                continue
            row_i = A[i]
            aik = row_i[k]
            for j in range(2 * n):
                if j != k:
                    row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    # Left block is now prev * I where prev = det of the row-permuted matrix,
    # and the right block is prev * inverse.
    det = prev if swaps % 2 == 0 else -prev
    sign = 1 if swaps % 2 == 0 else -1
    adj = [[sign * A[i][n + j] for j in range(n)] for i in range(n)]
    return det, adj


def _rref(A: list[list[Fraction]]) -> list[int]:
    """In-place reduced row echelon form; returns the pivot columns.

    Pivot choice is the first nonzero entry scanning rows downward in the
    current column, which makes the elimination deterministic.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return pivots


def rat_solve(A, b) -> Optional[list[Fraction]]:
    """Solve ``A x = b`` exactly over the rationals.

    Returns the unique solution, or ``None`` when the system is inconsistent.
    Raises :class:`UnderdeterminedSystem` when it is consistent but the
    columns of ``A`` are dependent.
    """
    rows, cols = _shape(A)
    if len(b) != rows:
        raise DimensionMismatch(f"A has {rows} rows but b has length {len(b)}")
    aug = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    pivots = _rref(aug)
    if cols in pivots:
        return None
    if len(pivots) < cols:
        raise UnderdeterminedSystem(f"rank {len(pivots)} < {cols} unknowns")
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = aug[r][cols]
    return x


def rank(M) -> int:
    if not M or not M[0]:
        return 0
    A = [[Fraction(x) for x in row] for row in M]
    return len(_rref(A))


def rat_nullspace(M) -> list[list[Fraction]]:
    """Basis of the right kernel of ``M``, one vector per free column."""
    rows, cols = _shape(M)
    A = [[Fraction(x) for x in row] for row in M]
    pivots = _rref(A)
    basis = []
    for free in range(cols):
        if free in pivots:
            continue
        v = [Fraction(0)] * cols
        v[free] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -A[r][free]
        basis.append(v)
    return basis


def rat_inverse(M) -> list[list[Fraction]]:
    n, cols = _shape(M)
    if n != cols:
        raise DimensionMismatch("inverse of a non-square matrix")
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(M)]
    if len(_rref(aug)) < n or any(aug[i][i] != 1 for i in range(n)):
        raise ZeroDivisionError("singular matrix has no inverse")
    return [row[n:] for row in aug]


def snf_divisors(M: IntMatrix) -> list[int]:
    """Diagonal of the Smith normal form, ``min(rows, cols)`` entries.

    Each entry divides the next; trailing zeros mark rank deficiency.
    """
    rows, cols = _shape(M)
    if rows == 0 or cols == 0:
        raise ValueError("Smith normal form of an empty matrix")
    A = [list(map(int, row)) for row in M]
    diag: list[int] = []
    t = 0
    while t < min(rows, cols):
        nonzero = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, rows):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    done = False
            if done:
                # Pivot must divide the remaining block.
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if A[i][j] % p), None)
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                continue
            # A remainder is smaller than the pivot: move it into place.
            nonzero = [(abs(A[i][t]), i, t) for i in range(t, rows) if A[i][t]]
            nonzero += [(abs(A[t][j]), t, j) for j in range(t, cols) if A[t][j]]
            _, pi, pj = min(nonzero)
            A[t], A[pi] = A[pi], A[t]
            for row in A:
                row[t], row[pj] = row[pj], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    diag += [0] * (min(rows, cols) - len(diag))
    return diag


def row_style_hermite(D: IntMatrix) -> tuple[list[list[int]], int]:
    """Unimodular ``U`` (n x n) and rank ``r`` with rows ``r..n-1`` of ``U @ D`` zero.

    The first ``r`` rows of ``U`` map the lattice ``span(D) ∩ Z^n``
    bijectively onto ``Z^r``.
    """
    n, k = _shape(D)
    A = [list(map(int, row)) for row in D]
    U = identity(n)
    r = 0
    for c in range(k):
        if r == n:
            break
        # Euclid on column c below row r until one nonzero remains.
        while True:
            nz = [i for i in range(r, n) if A[i][c]]
            if len(nz) <= 1:
                break
            p = min(nz, key=lambda i: (abs(A[i][c]), i))
            for i in nz:
                if i != p:
                    q = A[i][c] // A[p][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[p])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[p])]
        nz = [i for i in range(r, n) if A[i][c]]
        if not nz:
            continue
        p = nz[0]
        A[r], A[p] = A[p], A[r]
        U[r], U[p] = U[p], U[r]
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
            U[r] = [-a for a in U[r]]
        r += 1
    return U, r


def echelon_basis(Bt: IntMatrix) -> list[list[int]]:
    """Unimodular ``W`` with ``W @ Bt`` in reduced row echelon form over Z.

    Rows of ``Bt`` must be linearly independent.  Pivots come out positive
    and entries above each pivot are reduced into ``[0, pivot)``.
    """
    r, n = _shape(Bt)
    A = [list(map(int, row)) for row in Bt]
    W = identity(r)
    pivots = []
    row = 0
    for c in range(n):
        if row == r:
            break
        while True:
            nz = [i for i in range(row, r) if A[i][c]]
            if len(nz) <= 1:
                break
            p = min(nz, key=lambda i: (abs(A[i][c]), i))
            for i in nz:
                if i != p:
                    q = A[i][c] // A[p][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[p])]
                    W[i] = [a - q * b for a, b in zip(W[i], W[p])]
        nz = [i for i in range(row, r) if A[i][c]]
        if not nz:
            continue
        p = nz[0]
        A[row], A[p] = A[p], A[row]
        W[row], W[p] = W[p], W[row]
        if A[row][c] < 0:
            A[row] = [-a for a in A[row]]
            W[row] = [-a for a in W[row]]
        for i in range(row):
            q = A[i][c] // A[row][c]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[row])]
                W[i] = [a - q * b for a, b in zip(W[i], W[row])]
        pivots.append(c)
        row += 1
    return W
