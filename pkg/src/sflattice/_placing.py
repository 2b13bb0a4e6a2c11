"""Placing (beneath-beyond) triangulation of a full-dimensional point
configuration in Z^d, plus per-cell barycentric adjugates.

Points are integer tuples in chart coordinates; cells are tuples of point
indices.  Kept separate from :mod:`sflattice.polytope` because hull and
membership tests there are built on it.
"""

from __future__ import annotations

from typing import Sequence

from .exact import int_adjugate, int_det, rank

Coords = tuple[int, ...]


def orientation(pts: Sequence[Coords]) -> int:
    """Sign of the edge-matrix determinant of ``d + 1`` points in Z^d."""
    p0 = pts[0]
    M = [[a - b for a, b in zip(q, p0)] for q in pts[1:]]
    det = int_det(M)
    return (det > 0) - (det < 0)


def _initial_simplex(P: Sequence[Coords], order: Sequence[int], d: int) -> list[int]:
    chosen = [order[0]]
    for i in order[1:]:
        if len(chosen) == d + 1:
            break
        trial = chosen + [i]
        diffs = [[a - b for a, b in zip(P[j], P[trial[0]])] for j in trial[1:]]
        if rank(diffs) == len(trial) - 1:
            chosen = trial
    if len(chosen) != d + 1:
        raise ValueError("points do not span the ambient space")
    return chosen


def placing_triangulation(P: Sequence[Coords], order: Sequence[int] | None = None) -> list[tuple[int, ...]]:
    """Triangulate ``conv(P)`` using a subset of ``P`` as vertices.

    The first ``d + 1`` affinely independent points of ``order`` form the
    initial cell; every later point strictly beyond some boundary facet is
    coned to all facets it sees.  Points inside the current hull are skipped.
    Output order is deterministic for a given ``order``.
    """
    if order is None:
        order = range(len(P))
    order = list(order)
    d = len(P[order[0]])
    if d == 0:
        return [(order[0],)]
    first = _initial_simplex(P, order, d)
    cells: list[tuple[int, ...]] = [tuple(first)]
    # facet (sorted index tuple) -> (opposite vertex, orientation with it)
    boundary: dict[tuple[int, ...], tuple[int, int]] = {}
    for u in first:
        F = tuple(sorted(set(first) - {u}))
        boundary[F] = (u, orientation([P[j] for j in F] + [P[u]]))
    used = set(first)
    for i in order:
        if i in used:
            continue
        visible = []
        for F, (_, s_opp) in boundary.items():
            s = orientation([P[j] for j in F] + [P[i]])
            if s != 0 and s != s_opp:
                visible.append(F)
        if not visible:
            continue
        used.add(i)
        created: dict[tuple[int, ...], tuple[int, int]] = {}
        count: dict[tuple[int, ...], int] = {}
        for F in visible:
            del boundary[F]
            cells.append(F + (i,))
            for u in F:
                G = tuple(sorted((set(F) - {u}) | {i}))
                count[G] = count.get(G, 0) + 1
                if G not in created:
                    created[G] = (u, orientation([P[j] for j in G] + [P[u]]))
        for G, entry in created.items():
            if count[G] == 1:
                boundary[G] = entry
    return cells


def cell_adjugate(vertex_coords: Sequence[Coords]) -> tuple[int, list[list[int]]]:
    """``(den, adj)`` for the homogeneous matrix of a full-dimensional cell.

    ``adj @ (y, m)`` are the barycentric numerators of ``y`` with respect to
    the ``m``-dilate of the cell, over the positive denominator ``den``.
    """
    k = len(vertex_coords)
    H = [[vertex_coords[j][i] for j in range(k)] for i in range(k - 1)]
    H.append([1] * k)
    det, adj = int_adjugate(H)
    if det < 0:
        det = -det
        adj = [[-a for a in row] for row in adj]
    return det, adj
