import math
from collections import defaultdict
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sflattice import (
    DegenerateSimplex,
    LatticePolytope,
    OutsideError,
    Simplex,
    barycentric,
    empty_triangulation,
    lattice_points,
    locate,
    normalized_volume,
    vertex_volume,
)
from sflattice._placing import orientation
from sflattice.exact import int_det
from conftest import reeve, unit_cube, unit_simplex
import oracles
from strategies import polytopes


def test_square_cells(square):
    T = empty_triangulation(square)
    assert [s.vertices for s in T.simplices] == [((0, 0), (1, 0), (0, 1)), ((1, 0), (0, 1), (1, 1))]
    assert T.volumes() == [1, 1]


def test_locate_interior_and_tie(square):
    T = empty_triangulation(square)
    c, bc = locate(T, (Fraction(1, 4), Fraction(1, 4)))
    assert c == 0
    assert bc.coefficients == (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))
    # The diagonal is shared by both cells; the first one wins.
    c, bc = locate(T, (Fraction(1, 2), Fraction(1, 2)))
    assert c == 0 and bc.point() == (Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(OutsideError):
        locate(T, (2, 2))


def test_twice_unit_triangle():
    K = LatticePolytope([(0, 0), (2, 0), (0, 2)])
    T = empty_triangulation(K)
    assert len(T) == 4 and T.volumes() == [1, 1, 1, 1]


@pytest.mark.parametrize("r", [2, 3, 5])
def test_reeve_is_one_cell(r):
    T = empty_triangulation(reeve(r))
    assert len(T) == 1 and T.volumes() == [r]


def test_simplex_rejects_dependent_vertices():
    with pytest.raises(DegenerateSimplex):
        Simplex(((0, 0), (1, 1), (2, 2)))


def test_barycentric_round_trip():
    s = Simplex(((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2)))
    bc = barycentric(s, (1, 1, 1), 2)
    assert sum(bc.coefficients) == 2 and bc.point() == (1, 1, 1)
    assert bc.coefficients == (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(OutsideError):
        barycentric(s, (1, 1, 1), 1)


def test_normalized_volume_lower_dimensional():
    # A segment of lattice length 3 sitting in Z^3.
    assert normalized_volume(Simplex(((0, 0, 0), (3, 3, 3)))) == 3
    assert normalized_volume(Simplex(((1, 0), (0, 1)))) == 1
    assert normalized_volume(Simplex(((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 7)))) == 7


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cube_volume(n):
    assert vertex_volume(unit_cube(n)) == math.factorial(n)
    assert sum(empty_triangulation(unit_cube(n)).volumes()) == math.factorial(n)


def _check_face_to_face(T):
    """Every ridge lies in at most two cells, on opposite sides when shared;
    unshared ridges support the whole polytope."""
    coords = T.complex.coords
    d = len(coords[0])
    if d == 0:
        return
    ridges = defaultdict(list)
    for cell in T.cells:
        for j, opp in enumerate(cell):
            ridges[tuple(sorted(cell[:j] + cell[j + 1:]))].append(opp)
    all_pts = range(len(coords))
    for R, opps in ridges.items():
        base = [coords[i] for i in R]
        side = [orientation(base + [coords[o]]) for o in opps]
        assert len(opps) <= 2
        if len(opps) == 2:
            assert side[0] == -side[1] != 0
        else:
            signs = {orientation(base + [coords[p]]) for p in all_pts} - {0}
            assert len(signs) == 1


@given(polytopes(dims=(1, 3), count=(1, 7)))
def test_triangulation_invariants(K):
    T = empty_triangulation(K)
    S = lattice_points(K, 1)
    d = K.affine_dim
    # Cells are full-dimensional, colex-ordered and empty.
    for s in T.simplices:
        assert s.affine_dim == d
        assert list(s.vertices) == sorted(s.vertices, key=lambda p: tuple(reversed(p)))
        inside = [p for p in S if oracles.in_hull(s.vertices, p)]
        assert sorted(inside) == sorted(s.vertices)
    # Every lattice point is used, volumes add up.
    assert {p for s in T.simplices for p in s.vertices} == set(S)
    assert T.volumes() == [normalized_volume(s) for s in T.simplices]
    assert sum(T.volumes()) == vertex_volume(K) == vertex_volume(K, reverse=True)
    _check_face_to_face(T)


@given(polytopes(dims=(1, 3), count=(1, 6)), st.integers(1, 3))
def test_locate_returns_containing_cell(K, m):
    T = empty_triangulation(K)
    for x in lattice_points(K, m):
        c, bc = T.locate_dilate(x, m)
        assert all(l >= 0 for l in bc.coefficients)
        assert bc.point() == tuple(Fraction(v) for v in x)
        # No earlier cell contains x.
        for s in T.simplices[:c]:
            with pytest.raises(OutsideError):
                barycentric(s, x, m)


@given(polytopes(dims=(2, 3), count=(3, 6)))
def test_volume_scales_under_dilation(K):
    K2 = LatticePolytope([tuple(2 * c for c in v) for v in K.vertices])
    assert vertex_volume(K2) == 2 ** K.affine_dim * vertex_volume(K)


def test_determinant_volume_in_full_dimension():
    s = Simplex(((0, 0, 0), (2, 1, 0), (0, 3, 1), (1, 1, 4)))
    M = [[a - b for a, b in zip(v, s.vertices[0])] for v in s.vertices[1:]]
    assert normalized_volume(s) == abs(int_det(M))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_unit_simplex_is_one_unimodular_cell(n):
    T = empty_triangulation(unit_simplex(n))
    assert len(T) == 1 and T.volumes() == [1]
