"""Triangulations of lattice polytopes into empty lattice simplices.

The vertex set is triangulated by placing in lex order; afterwards every
remaining lattice point of ``K`` is inserted, in lex order, by a stellar
subdivision of all cells containing it.  Once every lattice point is a
vertex of the triangulation, no cell can contain a lattice point other than
its own vertices.

Cell vertices are listed in colex order (compare last coordinates first);
the first vertex is the basepoint used by the peeling step.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._placing import cell_adjugate, placing_triangulation
from .exact import int_det, rank, rat_solve, row_style_hermite
from .polytope import (
    CellComplex,
    LatticePolytope,
    Point,
    PointSet,
    _integral_scale,
    lattice_points,
)


class OutsideError(ValueError):
    """A point was expected to lie in a polytope (or its dilate) but does not."""


class DegenerateSimplex(ValueError):
    pass


def _colex(p: Point) -> tuple:
    return tuple(reversed(p))


@dataclass(frozen=True)
class Simplex:
    vertices: tuple[Point, ...]

    def __post_init__(self):
        if not self.vertices:
            raise DegenerateSimplex("simplex without vertices")
        base = self.vertices[0]
        diffs = [[a - b for a, b in zip(v, base)] for v in self.vertices[1:]]
        if diffs and rank(diffs) != len(diffs):
            raise DegenerateSimplex(f"affinely dependent vertices {self.vertices}")

    @property
    def affine_dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    def polytope(self) -> LatticePolytope:
        return LatticePolytope(self.vertices)


@dataclass(frozen=True)
class BarycentricCoords:
    """Exact coefficients over an ordered simplex, summing to ``mass``."""

    simplex: Simplex
    coefficients: tuple[Fraction, ...]
    mass: Fraction

    def point(self) -> tuple[Fraction, ...]:
        n = self.simplex.ambient_dim
        return tuple(sum((lam * v[c] for lam, v in zip(self.coefficients, self.simplex.vertices)),
                         Fraction(0)) for c in range(n))

    def as_dict(self) -> dict:
        return dict(zip(self.simplex.vertices, self.coefficients))


def barycentric(simplex: Simplex, x: Sequence, m=1) -> BarycentricCoords:
    """The unique coefficients ``lam >= 0`` with ``sum(lam) = m`` and
    ``sum(lam_i v_i) = x``; raises :class:`OutsideError` if ``x`` is not in
    ``m * simplex``."""
    k = len(simplex.vertices)
    A = [[v[c] for v in simplex.vertices] for c in range(simplex.ambient_dim)] + [[1] * k]
    lam = rat_solve(A, list(x) + [m])
    if lam is None or any(l < 0 for l in lam):
        raise OutsideError(f"{tuple(x)} is not in {m} * simplex")
    return BarycentricCoords(simplex, tuple(lam), Fraction(m))


def normalized_volume(simplex: Simplex) -> int:
    """Lattice volume of a simplex within its affine lattice (1 when unimodular)."""
    base = simplex.vertices[0]
    d = simplex.affine_dim
    if d == 0:
        return 1
    D = [[v[i] - base[i] for v in simplex.vertices[1:]] for i in range(simplex.ambient_dim)]
    U, r = row_style_hermite(D)
    if r != d:
        raise DegenerateSimplex("simplex is not full-dimensional in its span")
    E = [[sum(U[i][c] * D[c][j] for c in range(len(D))) for j in range(d)] for i in range(d)]
    return abs(int_det(E))


def vertex_volume(K: LatticePolytope, reverse: bool = False) -> int:
    """Normalized volume of ``K`` from a placing triangulation of its
    vertices (lex insertion order, or reversed lex)."""
    coords = [K.chart.coords(v) for v in K.vertices]
    order = range(len(coords) - 1, -1, -1) if reverse else range(len(coords))
    total = 0
    for cell in placing_triangulation(coords, order):
        pts = [coords[i] for i in cell]
        total += abs(int_det([[a - b for a, b in zip(q, pts[0])] for q in pts[1:]])) if len(pts) > 1 else 1
    return total


class Triangulation:
    """Empty-simplex triangulation of a lattice polytope.

    ``cells`` are index tuples into ``points`` (the lattice points of ``K``
    in lex order), each listed in colex vertex order; ``simplices`` is the
    same data as :class:`Simplex` objects.  Cell order is construction order.
    """

    def __init__(self, polytope: LatticePolytope, points: PointSet, cells: Sequence[tuple[int, ...]]):
        self.polytope = polytope
        self.points = points
        self.cells = [tuple(c) for c in cells]
        chart = polytope.chart
        self.complex = CellComplex([chart.coords(p) for p in points], self.cells)
        self.simplices = tuple(Simplex(tuple(points[i] for i in c)) for c in self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def volumes(self) -> list[int]:
        return [den for den, _ in self.complex.adj]

    def locate(self, q: Sequence) -> tuple[int, BarycentricCoords]:
        """First cell (construction order) containing the rational point ``q``."""
        return self.locate_dilate(q, 1)

    def locate_dilate(self, x: Sequence, m) -> tuple[int, BarycentricCoords]:
        xs, ms, L = _integral_scale(x, m)
        y = self.polytope.chart.coords(xs, ms)
        hit = None if y is None else self.complex.find(y, ms)
        if hit is None:
            raise OutsideError(f"{tuple(x)} is not in {m} * K")
        c, lam = hit
        coords = BarycentricCoords(self.simplices[c], tuple(l / L for l in lam), Fraction(m))
        return c, coords

    def locate_array(self, X: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
        """Batch version for lattice points of ``m * K``: cell index and
        barycentric numerators (over ``self.volumes()``) per row."""
        Y = self.polytope.chart.coords_array(X, m)
        return self.complex.locate_array(Y, m)


def _stellar_insert(cx_coords, cells, adjs, s):
    """Replace every cell containing point ``s`` by its stellar children."""
    h = list(cx_coords[s]) + [1]
    out_cells, out_adj = [], []
    for cell, (den, adj) in zip(cells, adjs):
        num = [sum(a * b for a, b in zip(row, h)) for row in adj]
        if min(num) < 0:
            out_cells.append(cell)
            out_adj.append((den, adj))
            continue
        for j, v in enumerate(num):
            if v > 0:
                child = cell[:j] + (s,) + cell[j + 1:]
                out_cells.append(child)
                out_adj.append(cell_adjugate([cx_coords[i] for i in child]))
    return out_cells, out_adj


def empty_triangulation(K: LatticePolytope) -> Triangulation:
    """Deterministic triangulation of ``K`` whose cells are empty simplices
    of dimension ``affine_dim(K)`` and whose vertices are all of ``K ∩ Z^n``."""
    if "empty_triangulation" in K._cache:
        return K._cache["empty_triangulation"]
    S = lattice_points(K, 1)
    coords = [K.chart.coords(p) for p in S]
    vidx = [S.index(v) for v in K.vertices]
    cells = [tuple(vidx[i] for i in c) for c in placing_triangulation([coords[i] for i in vidx])]
    adjs = [cell_adjugate([coords[i] for i in c]) for c in cells]
    used = {i for c in cells for i in c}
    for s in range(len(S)):
        if s not in used:
            cells, adjs = _stellar_insert(coords, cells, adjs, s)
            used.add(s)
    cells = [tuple(sorted(c, key=lambda i: _colex(S[i]))) for c in cells]
    T = Triangulation(K, S, cells)
    K._cache["empty_triangulation"] = T
    return T


def locate(T: Triangulation, q: Sequence) -> tuple[int, BarycentricCoords]:
    return T.locate(q)
