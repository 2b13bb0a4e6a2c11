"""Constructive decomposition of lattice points of dilates, and brute-force
checks of the associated sumset identities.

A lattice point ``x`` of ``mK`` is located in one cell of the empty
triangulation (as a point of the ``m``-dilate of that cell).  Repeatedly
peeling a cell vertex off ``x`` lowers the mass by one while keeping the
barycentric coordinates nonnegative; in an empty cell of dimension ``d`` this
works all the way down to mass ``d - 1``.  The peeled vertices are lattice
points of ``K`` and what remains is a lattice point of ``(d - 1)K``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .exact import DimensionMismatch
from .polytope import (
    ConvexCoeffs,
    LatticePolytope,
    Point,
    PointSet,
    k_fold_sumset,
    lattice_points,
    lattice_points_array,
    member,
    minkowski_sum,
)
from .triangulation import BarycentricCoords, Simplex, empty_triangulation

AMBIENT = "ambient"
EFFECTIVE = "effective"


class EmptinessViolated(RuntimeError):
    """No vertex can be peeled: the simplex was not empty."""


class NotInDilate(ValueError):
    pass


class BelowThreshold(ValueError):
    pass


def peel_vertex(simplex: Simplex, coords: BarycentricCoords) -> tuple[Point, BarycentricCoords]:
    """Remove one vertex from a point of ``m * simplex`` (integral ``m >= d``).

    Basepoint (first vertex) if the other coefficients sum to at most
    ``m - 1``; otherwise the first other vertex with coefficient ``>= 1``.
    """
    m = coords.mass
    d = simplex.affine_dim
    if m.denominator != 1 or m < max(d, 1):
        raise ValueError(f"peeling needs an integral mass >= {max(d, 1)}, got {m}")
    alpha = list(coords.coefficients)
    if sum(alpha[1:], Fraction(0)) <= m - 1:
        pos = 0
    else:
        pos = next((i for i in range(1, len(alpha)) if alpha[i] >= 1), None)
        if pos is None:
            raise EmptinessViolated(f"no vertex of {simplex.vertices} can be peeled from mass {m}")
    alpha[pos] -= 1
    return simplex.vertices[pos], BarycentricCoords(simplex, tuple(alpha), m - 1)


def head_dilation_for(K: LatticePolytope, m: int, mode: str = EFFECTIVE) -> int:
    if mode == EFFECTIVE:
        return min(m, max(K.affine_dim - 1, 0))
    if mode == AMBIENT:
        return min(m, max(K.ambient_dim - 1, 0))
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class Decomposition:
    """``target = head + sum(parts)`` with ``head`` in ``head_dilation * K``."""

    target: Point
    dilation: int
    head: Point
    head_dilation: int
    head_witness: ConvexCoeffs
    parts: tuple[Point, ...]

    def verify(self, K: LatticePolytope) -> bool:
        S = lattice_points(K, 1)
        if len(self.parts) != self.dilation - self.head_dilation:
            return False
        if any(p not in S for p in self.parts):
            return False
        total = [sum(c) for c in zip(self.head, *self.parts)]
        if tuple(total) != tuple(self.target):
            return False
        return self.head_witness.certifies(K, self.head, self.head_dilation)


class _Witnesses:
    """Each lattice point of ``K`` as an integral row over the vertices of
    ``K``, divided by a common denominator."""

    def __init__(self, K: LatticePolytope):
        S = lattice_points(K, 1)
        rows = [member(K, p, 1).terms for p in S]
        q = 1
        for terms in rows:
            for lam in terms.values():
                q = math.lcm(q, lam.denominator)
        self.q = q
        nv = len(K.vertices)
        self.rows = [[int(terms.get(j, 0) * q) for j in range(nv)] for terms in rows]


def _witnesses(K: LatticePolytope) -> _Witnesses:
    if "witnesses" not in K._cache:
        K._cache["witnesses"] = _Witnesses(K)
    return K._cache["witnesses"]


@dataclass
class DecompositionBatch:
    """Decompositions of many lattice points of one dilate, as arrays.

    ``parts[p]`` holds indices into ``lattice_points(K, 1)``; the head
    witness of row ``p`` is ``head_num[p] / head_den[p]`` over the vertices.
    """

    K: LatticePolytope
    dilation: int
    head_dilation: int
    targets: np.ndarray
    heads: np.ndarray
    parts: np.ndarray
    head_num: np.ndarray
    head_den: np.ndarray

    def __len__(self) -> int:
        return self.targets.shape[0]

    def decomposition(self, p: int) -> Decomposition:
        S = lattice_points(self.K, 1)
        den = int(self.head_den[p])
        terms = {j: Fraction(int(v), den) for j, v in enumerate(self.head_num[p].tolist()) if v}
        return Decomposition(
            target=tuple(int(c) for c in self.targets[p]),
            dilation=self.dilation,
            head=tuple(int(c) for c in self.heads[p]),
            head_dilation=self.head_dilation,
            head_witness=ConvexCoeffs(Fraction(self.head_dilation), terms),
            parts=tuple(sorted(S[int(i)] for i in self.parts[p])),
        )

    def verify(self) -> np.ndarray:
        """Per-row exact check of every decomposition invariant."""
        K = self.K
        S = lattice_points(K, 1)
        V = K.vertices.as_array(self.heads.dtype)
        ok = np.ones(len(self), dtype=bool)
        if self.parts.shape[1]:
            Sarr = S.as_array(self.heads.dtype)
            total = self.heads + Sarr[self.parts].sum(axis=1)
            ok &= (self.parts >= 0).all(axis=1) & (self.parts < len(S)).all(axis=1)
        else:
            total = self.heads
        ok &= (total == self.targets).all(axis=1)
        ok &= (self.head_num >= 0).all(axis=1)
        ok &= self.head_num.sum(axis=1) == self.head_dilation * self.head_den
        ok &= (self.head_num @ V == self.heads * self.head_den[:, None]).all(axis=1)
        return ok


def _decompose_rows(K: LatticePolytope, X: np.ndarray, m: int, h: int) -> DecompositionBatch:
    T = empty_triangulation(K)
    W = _witnesses(K)
    dens = T.volumes()
    k = K.affine_dim + 1
    safe = kernels.fits_int64(max(dens), max(max(map(abs, r)) for r in W.rows) or 1, W.q,
                              max(m, 1), k * len(K.vertices)) and X.dtype != object
    dtype = np.int64 if safe else object
    X = X.astype(dtype)
    idx, num = T.locate_array(X, m)
    if (idx < 0).any():
        bad = X[int(np.flatnonzero(idx < 0)[0])]
        raise NotInDilate(f"{tuple(int(c) for c in bad)} is not in {m} * K")
    cells = np.array(T.cells, dtype=np.int64).reshape(len(T), k)
    den = np.array(dens, dtype=dtype)[idx]
    if safe:
        peeled, rest, status = kernels.peel(num.astype(np.int64), den, m, h)
    else:
        peeled, rest, status = kernels.peel_numpy(num.astype(object), den.astype(object), m, h)
    if (status != kernels.STATUS_OK).any():
        p = int(np.flatnonzero(status)[0])
        raise EmptinessViolated(f"peeling failed for {tuple(X[p].tolist())} in cell {T.cells[idx[p]]}")
    cell_rows = cells[idx]
    part_idx = np.take_along_axis(cell_rows, peeled, axis=1)
    S = lattice_points(K, 1).as_array(dtype)
    heads = X - S[part_idx].sum(axis=1) if part_idx.shape[1] else X.copy()
    # Head witness: remaining cell coordinates pushed onto the vertices of K.
    Wrows = np.array(W.rows, dtype=dtype).reshape(len(W.rows), len(K.vertices))
    head_num = np.einsum("pi,pij->pj", rest.astype(dtype), Wrows[cell_rows]) if dtype != object else \
        np.array([rest[p] @ Wrows[cell_rows[p]] for p in range(len(X))], dtype=object).reshape(len(X), -1)
    head_den = den * W.q
    return DecompositionBatch(K, m, h, X, heads, part_idx, head_num, head_den)


def decompose(K: LatticePolytope, x: Sequence[int], m: int, mode: str = EFFECTIVE) -> Decomposition:
    """Split a lattice point of ``mK`` into a head in ``hK`` plus ``m - h``
    lattice points of ``K``, with ``h = min(m, d - 1)`` (effective mode) or
    ``h = min(m, n - 1)`` (ambient mode)."""
    if len(x) != K.ambient_dim:
        raise DimensionMismatch(f"point of dimension {len(x)} for a polytope in dimension {K.ambient_dim}")
    if m < 1:
        raise ValueError("dilation must be at least 1")
    if any(Fraction(c).denominator != 1 for c in x) or member(K, x, m) is None:
        raise NotInDilate(f"{tuple(x)} is not a lattice point of {m} * K")
    h = head_dilation_for(K, m, mode)
    X = np.array([[int(c) for c in x]], dtype=object).reshape(1, K.ambient_dim)
    if kernels.fits_int64(max(map(abs, x), default=0) + 1):
        X = X.astype(np.int64)
    dec = _decompose_rows(K, X, m, h).decomposition(0)
    if not dec.verify(K):  # pragma: no cover - exact arithmetic
        raise AssertionError("decomposition failed re-verification")
    return dec


def decompose_all(K: LatticePolytope, m: int, mode: str = EFFECTIVE) -> DecompositionBatch:
    """Decompose every lattice point of ``mK`` at once."""
    h = head_dilation_for(K, m, mode)
    return _decompose_rows(K, np.array(lattice_points_array(K, m)), m, h)


@dataclass(frozen=True)
class IdentityReport:
    name: str
    dilation: int
    holds: bool
    lhs_size: int
    rhs_size: int
    counterexample: Optional[Point] = None
    counterexample_side: Optional[str] = None


def _compare(name: str, m: int, lhs: PointSet, rhs: PointSet) -> IdentityReport:
    if lhs == rhs:
        return IdentityReport(name, m, True, len(lhs), len(rhs))
    only_l = sorted(set(lhs.points) - set(rhs.points))
    only_r = sorted(set(rhs.points) - set(lhs.points))
    if only_l and (not only_r or only_l[0] <= only_r[0]):
        bad, side = only_l[0], "lhs"
    else:
        bad, side = only_r[0], "rhs"
    return IdentityReport(name, m, False, len(lhs), len(rhs), bad, side)


def sumset_rhs(K: LatticePolytope, head: int, m: int) -> PointSet:
    """``head*K ∩ Z^n + (m - head)(K ∩ Z^n)``."""
    return minkowski_sum(lattice_points(K, head), k_fold_sumset(lattice_points(K, 1), m - head))


def verify_reduced_identity(K: LatticePolytope, m: int) -> IdentityReport:
    """``mK ∩ Z^n == (n-1)K ∩ Z^n + (m-n+1)(K ∩ Z^n)`` for ``m >= n - 1``."""
    n = K.ambient_dim
    if m < max(n - 1, 1):
        raise BelowThreshold(f"identity needs m >= {max(n - 1, 1)}, got {m}")
    return _compare("head n-1", m, lattice_points(K, m), sumset_rhs(K, n - 1, m))


def verify_ambient_identity(K: LatticePolytope, m: int) -> IdentityReport:
    """``mK ∩ Z^n == nK ∩ Z^n + (m-n)(K ∩ Z^n)`` for ``m >= n``."""
    n = K.ambient_dim
    if m < n:
        raise BelowThreshold(f"identity needs m >= {n}, got {m}")
    return _compare("head n", m, lattice_points(K, m), sumset_rhs(K, n, m))


def verify_empty_simplex_identity(K: LatticePolytope) -> IdentityReport:
    """``dK ∩ Z^n == (d-1)K ∩ Z^n + K ∩ Z^n`` for an empty simplex of dimension ``d >= 2``."""
    d = K.affine_dim
    if not K.is_simplex():
        raise ValueError("polytope is not a simplex")
    if d < 2:
        raise ValueError(f"needs dimension >= 2, got {d}")
    if lattice_points(K, 1) != K.vertices:
        raise ValueError("simplex is not empty")
    return _compare("empty simplex", d, lattice_points(K, d), sumset_rhs(K, d - 1, d))
