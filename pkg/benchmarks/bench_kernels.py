"""Compare the numba and numpy kernels on the same inputs.

    python benchmarks/bench_kernels.py [--dilation M] [--repeat R]

Inputs come from real workloads: every lattice point of ``M * K`` is
located in the empty triangulation of ``K`` and then peeled down to the
head dilation.  Both backends must return identical arrays.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from sflattice import LatticePolytope, empty_triangulation, head_dilation_for
from sflattice import kernels
from sflattice.polytope import lattice_points_array

WORKLOADS = {
    "reeve r=5": [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 5)],
    "cross 3": [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)],
    "box 2x2x1x1": [(a, b, c, e) for a in (0, 2) for b in (0, 2) for c in (0, 1) for e in (0, 1)],
}


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(name, pts, m, repeat):
    K = LatticePolytope(pts, name=name)
    T = empty_triangulation(K)
    X = lattice_points_array(K, m).astype(np.int64)
    Y = K.chart.coords_array(X, m).astype(np.int64)
    adj, den_cells = T.complex.arrays(np.int64)
    h = head_dilation_for(K, m)

    rows = []
    locate = {}
    for label, fn in (("numpy", kernels.locate_cells_numpy), ("numba", kernels.locate_cells_numba)):
        fn(adj, Y[:1], m)  # warm up the jit
        locate[label] = _best(lambda: fn(adj, Y, m), repeat)
    idx, num = locate["numpy"][1]
    den = den_cells[idx]
    peel = {}
    for label, fn in (("numpy", kernels.peel_numpy), ("numba", kernels.peel_numba)):
        fn(num[:1], den[:1], m, h)
        peel[label] = _best(lambda: fn(num, den, m, h), repeat)

    for a, b in zip(locate["numpy"][1], locate["numba"][1]):
        assert np.array_equal(a, b), "locate backends disagree"
    for a, b in zip(peel["numpy"][1], peel["numba"][1]):
        assert np.array_equal(a, b), "peel backends disagree"
    for kernel, res in (("locate", locate), ("peel", peel)):
        t_np, t_nb = res["numpy"][0], res["numba"][0]
        rows.append((name, len(T), len(X), kernel, t_np, t_nb, t_np / t_nb if t_nb else float("inf")))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dilation", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.njit is None:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'workload':<14}{'cells':>6}{'points':>9}  {'kernel':<7}{'numpy s':>10}{'numba s':>10}{'speedup':>9}")
    for name, pts in WORKLOADS.items():
        for row in bench(name, pts, args.dilation, args.repeat):
            print(f"{row[0]:<14}{row[1]:>6}{row[2]:>9}  {row[3]:<7}{row[4]:>10.4f}{row[5]:>10.4f}{row[6]:>8.1f}x")


if __name__ == "__main__":
    main()
