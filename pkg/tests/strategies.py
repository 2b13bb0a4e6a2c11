"""Hypothesis strategies for small lattice configurations."""

from hypothesis import strategies as st

from sflattice import LatticePolytope


def int_matrices(rows, cols, lo=-5, hi=5):
    return st.lists(
        st.lists(st.integers(lo, hi), min_size=cols, max_size=cols), min_size=rows, max_size=rows
    )


@st.composite
def square_matrices(draw, max_n=4, lo=-5, hi=5):
    n = draw(st.integers(1, max_n))
    return draw(int_matrices(n, n, lo, hi))


@st.composite
def point_lists(draw, dims=(1, 3), count=(1, 6), lo=-2, hi=2):
    n = draw(st.integers(*dims))
    pt = st.tuples(*[st.integers(lo, hi)] * n)
    return n, draw(st.lists(pt, min_size=count[0], max_size=count[1]))


@st.composite
def polytopes(draw, dims=(1, 3), count=(1, 6), lo=-2, hi=2):
    n, pts = draw(point_lists(dims, count, lo, hi))
    return LatticePolytope(pts, ambient_dim=n)
