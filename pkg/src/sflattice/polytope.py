"""Lattice polytopes: point sets, hulls, exact membership, dilate
enumeration and Minkowski sumsets.

A :class:`LatticePolytope` is stored by its extreme points.  Membership and
enumeration work in an integral chart of the affine span, so polytopes of
lower dimension than the ambient space are handled without special cases.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels
from ._placing import cell_adjugate, placing_triangulation
from .exact import (
    DimensionMismatch,
    UnderdeterminedSystem,
    echelon_basis,
    rank,
    rat_inverse,
    rat_nullspace,
    rat_solve,
    row_style_hermite,
    snf_divisors,
    transpose,
)

Point = tuple[int, ...]

# Grid points scanned per kernel call when enumerating a bounding box.
_SCAN_CHUNK = 1 << 18


class InvalidWitness(ValueError):
    pass


@dataclass(frozen=True)
class PointSet:
    """Finite set of lattice points, lex-sorted and deduplicated."""

    ambient_dim: int
    points: tuple[Point, ...]

    @classmethod
    def of(cls, points: Iterable[Sequence[int]], ambient_dim: int | None = None) -> "PointSet":
        pts = sorted({tuple(int(c) for c in p) for p in points})
        if ambient_dim is None:
            if not pts:
                raise ValueError("ambient dimension of an empty point set is unknown")
            ambient_dim = len(pts[0])
        for p in pts:
            if len(p) != ambient_dim:
                raise DimensionMismatch(f"point {p} does not have dimension {ambient_dim}")
        return cls(ambient_dim, tuple(pts))

    @classmethod
    def from_array(cls, arr: np.ndarray, ambient_dim: int) -> "PointSet":
        """Build from rows already sorted and unique."""
        return cls(ambient_dim, tuple(tuple(int(c) for c in row) for row in arr.tolist()))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def __contains__(self, p) -> bool:
        return tuple(p) in self._members

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.points)

    def index(self, p) -> int:
        return self._positions[tuple(p)]

    @cached_property
    def _positions(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    def as_array(self, dtype=None) -> np.ndarray:
        if dtype is None:
            dtype = np.int64 if kernels.fits_int64(_max_abs(self.points)) else object
        if not self.points:
            return np.zeros((0, self.ambient_dim), dtype=dtype)
        return np.array(self.points, dtype=dtype).reshape(len(self.points), self.ambient_dim)


@dataclass(frozen=True)
class ConvexCoeffs:
    """Nonnegative rational weights on the vertices of a polytope.

    ``terms`` maps a vertex index to its weight; the weights sum to ``mass``
    and the weighted vertex sum is the represented point.
    """

    mass: Fraction
    terms: dict = field(hash=False)

    def point(self, vertices: Sequence[Point], dim: int) -> tuple[Fraction, ...]:
        acc = [Fraction(0)] * dim
        for i, lam in self.terms.items():
            for c in range(dim):
                acc[c] += lam * vertices[i][c]
        return tuple(acc)

    def certifies(self, K: "LatticePolytope", x: Sequence, m) -> bool:
        if any(lam < 0 for lam in self.terms.values()):
            return False
        if sum(self.terms.values(), Fraction(0)) != self.mass or self.mass != m:
            return False
        return self.point(K.vertices.points, K.ambient_dim) == tuple(Fraction(c) for c in x)


def _max_abs(points) -> int:
    return max((abs(c) for p in points for c in p), default=0)


@dataclass(frozen=True)
class AffineChart:
    """Integral coordinates on the affine lattice spanned by a point set.

    ``U`` is unimodular; its first ``dim`` rows map ``span ∩ Z^n`` onto
    ``Z^dim`` and its remaining rows vanish on the span.  A point ``x`` of the
    ``m``-dilate has chart coordinates ``U[:dim] @ (x - m * base)``.
    """

    base: Point
    U: tuple[tuple[int, ...], ...]
    Uinv: tuple[tuple[int, ...], ...]
    dim: int

    @classmethod
    def of(cls, points: Sequence[Point]) -> "AffineChart":
        base = points[0]
        n = len(base)
        if n == 0:
            return cls(base, (), (), 0)
        D = [[p[i] - base[i] for p in points[1:]] for i in range(n)]
        if not points[1:]:
            D = [[0] for _ in range(n)]
        U, r = row_style_hermite(D)
        Uinv = [[int(v) for v in row] for row in rat_inverse(U)]
        if r:
            # Re-base the span lattice on an echelon basis so that chart
            # coordinates stay close to ambient ones (tight bounding boxes).
            W = echelon_basis([[Uinv[i][j] for i in range(n)] for j in range(r)])
            Wit = [[int(v) for v in row] for row in transpose(rat_inverse(W))]
            U = [[sum(Wit[i][k] * U[k][j] for k in range(r)) for j in range(n)] for i in range(r)] + U[r:]
            Uinv = [[sum(Uinv[i][k] * W[j][k] for k in range(r)) for j in range(r)] + Uinv[i][r:]
                    for i in range(n)]
        return cls(base, tuple(map(tuple, U)), tuple(map(tuple, Uinv)), r)

    def coords(self, x: Sequence, mass=1) -> Optional[tuple]:
        """Chart coordinates, or ``None`` if ``x`` is off the dilated span."""
        z = [xi - mass * bi for xi, bi in zip(x, self.base)]
        rows = [sum(u * zi for u, zi in zip(row, z)) for row in self.U]
        if any(r != 0 for r in rows[self.dim:]):
            return None
        return tuple(rows[: self.dim])

    def point(self, y: Sequence, mass=1) -> tuple:
        n = len(self.base)
        return tuple(mass * self.base[i] + sum(self.Uinv[i][j] * y[j] for j in range(self.dim))
                     for i in range(n))

    def coords_array(self, X: np.ndarray, mass: int) -> np.ndarray:
        Ud = np.array(self.U[: self.dim], dtype=X.dtype).reshape(self.dim, X.shape[1])
        return (X - mass * np.array(self.base, dtype=X.dtype)) @ Ud.T

    def points_array(self, Y: np.ndarray, mass: int) -> np.ndarray:
        n = len(self.base)
        B = np.array([row[: self.dim] for row in self.Uinv], dtype=Y.dtype).reshape(n, self.dim)
        return Y @ B.T + mass * np.array(self.base, dtype=Y.dtype)


class CellComplex:
    """Full-dimensional cells over chart points, with stacked adjugates for
    the batch kernels and exact Python copies for single queries."""

    def __init__(self, coords: Sequence[tuple[int, ...]], cells: Sequence[tuple[int, ...]]):
        self.coords = list(coords)
        self.cells = [tuple(c) for c in cells]
        self.adj: list[tuple[int, list[list[int]]]] = [
            cell_adjugate([self.coords[i] for i in c]) for c in self.cells
        ]

    def __len__(self) -> int:
        return len(self.cells)

    @cached_property
    def max_adj(self) -> int:
        return max((abs(a) for _, adj in self.adj for row in adj for a in row), default=1)

    def arrays(self, dtype) -> tuple[np.ndarray, np.ndarray]:
        k = len(self.cells[0])
        A = np.array([adj for _, adj in self.adj], dtype=dtype).reshape(len(self.cells), k, k)
        den = np.array([den for den, _ in self.adj], dtype=dtype)
        return A, den

    def find(self, y: Sequence, mass) -> Optional[tuple[int, list]]:
        """First cell whose ``mass``-dilate contains ``y``; returns the cell
        index and the exact barycentric coordinates (summing to ``mass``)."""
        h = list(y) + [mass]
        for c, (den, adj) in enumerate(self.adj):
            num = [sum(a * b for a, b in zip(row, h)) for row in adj]
            if all(v >= 0 for v in num):
                return c, [Fraction(v) / den for v in num]
        return None

    def locate_array(self, Y: np.ndarray, mass: int) -> tuple[np.ndarray, np.ndarray]:
        bound = max(int(np.abs(Y).max()) if Y.size else 0, abs(mass), 1)
        k = len(self.cells[0])
        if kernels.fits_int64(self.max_adj, bound, k):
            adj, _ = self.arrays(np.int64)
            return kernels.locate_cells(adj, Y.astype(np.int64), mass)
        adj, _ = self.arrays(object)
        return kernels.locate_cells_numpy(adj, Y.astype(object), mass)


class LatticePolytope:
    """Convex hull of finitely many lattice points, kept by its vertices."""

    def __init__(self, points: Iterable[Sequence[int]], ambient_dim: int | None = None,
                 name: str | None = None):
        S = points if isinstance(points, PointSet) else PointSet.of(points, ambient_dim)
        if not S.points:
            raise ValueError("a lattice polytope needs at least one point")
        self.name = name
        self.vertices = extreme_points(S)
        self.ambient_dim = S.ambient_dim
        self.chart = AffineChart.of(self.vertices.points)
        self.affine_dim = self.chart.dim
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"LatticePolytope({list(self.vertices.points)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, LatticePolytope) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    @cached_property
    def vertex_cells(self) -> CellComplex:
        """Placing triangulation of the vertices (lex insertion order)."""
        coords = [self.chart.coords(v) for v in self.vertices]
        return CellComplex(coords, placing_triangulation(coords))

    def is_simplex(self) -> bool:
        return len(self.vertices) == self.affine_dim + 1


def affine_dim(S: PointSet | Sequence[Point]) -> int:
    pts = list(S)
    if not pts:
        raise ValueError("affine dimension of an empty set")
    base = pts[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
    return rank(diffs) if diffs else 0


def _in_hull_of(chart: AffineChart, others: list[Point], p: Point) -> bool:
    coords = [chart.coords(q) for q in others]
    if affine_dim(coords) < chart.dim:
        return False
    cx = CellComplex(coords, placing_triangulation(coords))
    return cx.find(chart.coords(p), 1) is not None


def extreme_points(S: PointSet) -> PointSet:
    """Points of ``S`` that are not convex combinations of the others."""
    pts = list(S.points)
    if not pts:
        raise ValueError("extreme points of an empty set")
    if len(pts) == 1:
        return S
    chart = AffineChart.of(pts)
    coords = [chart.coords(p) for p in pts]
    # Points skipped by a placing triangulation lie in the hull of
    # earlier points and cannot be extreme.
    used = sorted({i for cell in placing_triangulation(coords) for i in cell})
    keep = [pts[i] for i in used if not _in_hull_of(chart, pts[:i] + pts[i + 1:], pts[i])]
    return PointSet(S.ambient_dim, tuple(keep))


def _check_point(K: LatticePolytope, x: Sequence) -> None:
    if len(x) != K.ambient_dim:
        raise DimensionMismatch(f"point of dimension {len(x)} for a polytope in dimension {K.ambient_dim}")


def _integral_scale(x: Sequence, m) -> tuple[list[int], int, int]:
    """Scale a rational point and mass to integers: ``(L*x, L*m, L)``."""
    L = 1
    for v in list(x) + [m]:
        L = math.lcm(L, Fraction(v).denominator)
    return [int(Fraction(v) * L) for v in x], int(Fraction(m) * L), L


def member(K: LatticePolytope, x: Sequence, m=1) -> Optional[ConvexCoeffs]:
    """Witness that ``x`` lies in the dilate ``m * K``, or ``None``.

    ``x`` and ``m`` may be rational.  The witness is supported on one cell of
    the vertex triangulation, so its support is affinely independent.
    """
    _check_point(K, x)
    if m < 0:
        raise ValueError("dilation must be nonnegative")
    xs, ms, L = _integral_scale(x, m)
    if ms == 0:
        return ConvexCoeffs(Fraction(0), {}) if all(c == 0 for c in xs) else None
    y = K.chart.coords(xs, ms)
    if y is None:
        return None
    hit = K.vertex_cells.find(y, ms)
    if hit is None:
        return None
    c, lam = hit
    terms = {i: l / L for i, l in zip(K.vertex_cells.cells[c], lam) if l != 0}
    witness = ConvexCoeffs(Fraction(m), dict(sorted(terms.items())))
    if not witness.certifies(K, x, m):  # pragma: no cover - exact arithmetic
        raise AssertionError("membership witness failed substitution")
    return witness


def member_by_subsets(K: LatticePolytope, x: Sequence, m=1) -> Optional[ConvexCoeffs]:
    """Same contract as :func:`member`, by enumerating affinely independent
    vertex subsets of size ``d + 1`` in lexicographic index order."""
    _check_point(K, x)
    V = K.vertices.points
    d = K.affine_dim
    for subset in itertools.combinations(range(len(V)), d + 1):
        A = [[V[i][c] for i in subset] for c in range(K.ambient_dim)] + [[1] * (d + 1)]
        try:
            lam = rat_solve(A, list(x) + [m])
        except UnderdeterminedSystem:
            continue
        if lam is not None and all(l >= 0 for l in lam):
            terms = {i: l for i, l in zip(subset, lam) if l != 0}
            return ConvexCoeffs(Fraction(m), terms)
    return None


def _affinely_independent(points: Sequence[Sequence]) -> bool:
    base = points[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in points[1:]]
    return not diffs or rank(diffs) == len(diffs)


def caratheodory_reduce(K: LatticePolytope, x: Sequence, coeffs: ConvexCoeffs) -> ConvexCoeffs:
    """Shrink a witness to an affinely independent support (at most d + 1
    vertices) representing the same point with the same mass."""
    if not coeffs.certifies(K, x, coeffs.mass):
        raise InvalidWitness("coefficients do not represent the point")
    V = K.vertices.points
    lam = {i: Fraction(l) for i, l in sorted(coeffs.terms.items()) if l != 0}
    while True:
        support = list(lam)
        if _affinely_independent([V[i] for i in support]):
            return ConvexCoeffs(coeffs.mass, lam)
        A = [[V[i][c] for i in support] for c in range(K.ambient_dim)] + [[1] * len(support)]
        mu = rat_nullspace(A)[0]
        if not any(v > 0 for v in mu):
            mu = [-v for v in mu]
        t = min(lam[i] / v for i, v in zip(support, mu) if v > 0)
        lam = {i: lam[i] - t * v for i, v in zip(support, mu)}
        lam = {i: l for i, l in lam.items() if l != 0}


def _grid_chunks(lo: Sequence[int], hi: Sequence[int], dtype):
    widths = [h - l + 1 for l, h in zip(lo, hi)]
    total = math.prod(widths)
    lo_arr = np.array(lo, dtype=dtype)
    for start in range(0, total, _SCAN_CHUNK):
        flat = np.arange(start, min(total, start + _SCAN_CHUNK))
        idx = np.stack(np.unravel_index(flat, widths), axis=1).astype(dtype)
        yield idx + lo_arr


def lattice_points_array(K: LatticePolytope, m: int) -> np.ndarray:
    """Rows of ``mK ∩ Z^n`` in lex order.

    Scans the integral bounding box of ``m * K`` in chart coordinates, so the
    cost is exponential in the affine dimension of ``K``.
    """
    key = ("lattice_points", m)
    if key in K._cache:
        return K._cache[key]
    if m < 0:
        raise ValueError("dilation must be nonnegative")
    n, d = K.ambient_dim, K.affine_dim
    top = _max_abs(K.vertices.points) * max(m, 1)
    dtype = np.int64 if kernels.fits_int64(top, 4 * n) else object
    if m == 0:
        out = np.zeros((1, n), dtype=dtype)
    elif d == 0:
        out = np.array([[m * c for c in K.chart.base]], dtype=dtype).reshape(1, n)
    else:
        coords = K.vertex_cells.coords
        lo = [m * min(c[i] for c in coords) for i in range(d)]
        hi = [m * max(c[i] for c in coords) for i in range(d)]
        found = []
        for Y in _grid_chunks(lo, hi, dtype):
            idx, _ = K.vertex_cells.locate_array(Y, m)
            found.append(Y[idx >= 0])
        Y = np.concatenate(found, axis=0)
        X = K.chart.points_array(Y.astype(dtype), m)
        out = X[np.lexsort(X.T[::-1])] if X.shape[0] else X
    out.setflags(write=False)
    K._cache[key] = out
    return out


def lattice_points(K: LatticePolytope, m: int = 1) -> PointSet:
    """``mK ∩ Z^n`` as a canonical point set (``m = 0`` gives ``{0}``)."""
    key = ("lattice_pointset", m)
    if key not in K._cache:
        K._cache[key] = PointSet.from_array(lattice_points_array(K, m), K.ambient_dim)
    return K._cache[key]


def _encode(arr: np.ndarray, lo: np.ndarray, widths: np.ndarray) -> np.ndarray:
    # Mixed-radix key, most significant coordinate first, so key order is lex order.
    key = np.zeros(arr.shape[0], dtype=np.int64)
    for c in range(arr.shape[1]):
        key = key * widths[c] + (arr[:, c] - lo[c])
    return key


def _decode(keys: np.ndarray, lo: np.ndarray, widths: np.ndarray) -> np.ndarray:
    out = np.empty((keys.shape[0], len(widths)), dtype=np.int64)
    for c in range(len(widths) - 1, -1, -1):
        out[:, c] = keys % widths[c] + lo[c]
        keys = keys // widths[c]
    return out


def _sum_arrays(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    n = A.shape[1]
    if A.shape[0] == 0 or B.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    lo = A.min(axis=0) + B.min(axis=0)
    hi = A.max(axis=0) + B.max(axis=0)
    widths = hi - lo + 1
    if math.prod(int(w) for w in widths) >= kernels.INT64_SAFE:
        sums = {tuple(a + b) for a in A.tolist() for b in B.tolist()}
        return np.array(sorted(sums), dtype=object).reshape(len(sums), n)
    keys = np.zeros(0, dtype=np.int64)
    step = max(1, (1 << 21) // B.shape[0])
    for s in range(0, A.shape[0], step):
        block = (A[s:s + step, None, :] + B[None, :, :]).reshape(-1, n)
        keys = np.union1d(keys, _encode(block, lo, widths))
    return _decode(keys, lo, widths)


def minkowski_sum(A: PointSet, B: PointSet) -> PointSet:
    if A.ambient_dim != B.ambient_dim:
        raise DimensionMismatch(f"sum of point sets in dimensions {A.ambient_dim} and {B.ambient_dim}")
    return PointSet.from_array(_sum_arrays(A.as_array(), B.as_array()), A.ambient_dim)


def k_fold_sumset(A: PointSet, k: int) -> PointSet:
    """``A + ... + A`` (k times); the 0-fold sumset is ``{0}``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    acc = PointSet(A.ambient_dim, ((0,) * A.ambient_dim,))
    for _ in range(k):
        acc = minkowski_sum(acc, A)
    return acc


def is_empty_polytope(K: LatticePolytope) -> bool:
    return lattice_points(K, 1) == K.vertices


def is_projectively_faithful(K: LatticePolytope) -> bool:
    """Do differences of the lattice points of ``K`` generate ``Z^n``?"""
    S = lattice_points(K, 1).points
    n = K.ambient_dim
    if len(S) < n + 1:
        return False
    base = S[0]
    M = [[p[i] - base[i] for p in S[1:]] for i in range(n)]
    divisors = snf_divisors(M)
    return len(divisors) == n and all(dv == 1 for dv in divisors)
