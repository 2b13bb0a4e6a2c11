"""Brute-force reference implementations used only by the tests.

They share nothing with the library except the exact linear solver.
"""

import itertools
from fractions import Fraction

from sflattice.exact import rank, rat_solve


def affinely_independent(pts):
    diffs = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
    return not diffs or rank(diffs) == len(diffs)


def in_hull(points, x, m=1):
    """Is ``x`` in ``m * conv(points)``?  Tries every affinely independent subset."""
    points = list(points)
    n = len(x)
    if m == 0:
        return all(c == 0 for c in x)
    for k in range(1, min(len(points), n + 1) + 1):
        for sub in itertools.combinations(points, k):
            if not affinely_independent(sub):
                continue
            A = [[p[c] for p in sub] for c in range(n)] + [[1] * k]
            lam = rat_solve(A, [Fraction(c) for c in x] + [Fraction(m)])
            if lam is not None and all(l >= 0 for l in lam):
                return True
    return False


def extreme(points):
    pts = sorted(set(points))
    return [p for p in pts if not in_hull([q for q in pts if q != p], p)]


def dilate_points(points, m):
    """Lattice points of ``m * conv(points)`` by scanning the bounding box."""
    pts = list(points)
    n = len(pts[0])
    V = extreme(pts)
    lo = [m * min(p[c] for p in V) for c in range(n)]
    hi = [m * max(p[c] for p in V) for c in range(n)]
    grid = itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)])
    return sorted(x for x in grid if in_hull(V, x, m))


def sumset(A, B):
    return sorted({tuple(a + b for a, b in zip(p, q)) for p in A for q in B})
