"""Acceptance criteria, all exact (integer arithmetic, zero tolerance).

Run under pytest for one PASS/FAIL line per criterion in the terminal
summary, or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import functools
import itertools
import math
import os
import subprocess
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from sflattice import (
    AMBIENT,
    EFFECTIVE,
    EmptinessViolated,
    LatticePolytope,
    SharpnessParams,
    Verdict,
    VertexCone,
    cone_holes,
    decompose_all,
    empty_triangulation,
    is_solid,
    lattice_points,
    locally_solid_check,
    verify_empty_simplex_identity,
    verify_reduced_identity,
    sharpness_simplex,
    verify_sharpness,
    vertex_volume,
)
from sflattice.corpus import RunConfig, random_empty_simplices, random_polytopes

SEED = 0
CORPUS = RunConfig(seed=SEED, dims=(1, 4), points=(1, 8), coords=(-3, 3), m_max=6, count=200)
EMPTY_SIMPLICES = 100
REEVE = LatticePolytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2)], name="reeve r=2")
SHARP4 = SharpnessParams(4, (1, 1, 1), 4)
SHARP5 = SharpnessParams(5, (1, 1, 1, 1), 5)

RESULTS: dict[int, tuple[bool, str]] = {}


@functools.lru_cache(maxsize=None)
def corpus() -> tuple[LatticePolytope, ...]:
    return tuple(random_polytopes(CORPUS))


@functools.lru_cache(maxsize=None)
def empty_simplices() -> tuple[LatticePolytope, ...]:
    return tuple(random_empty_simplices(SEED, EMPTY_SIMPLICES, dims=(2, 4)))


def _unit_simplex(n):
    return LatticePolytope([(0,) * n] + [tuple(int(i == j) for j in range(n)) for i in range(n)])


def _unit_cube(n):
    return LatticePolytope(list(itertools.product((0, 1), repeat=n)))


# ---------------------------------------------------------------- criteria

def criterion_1():
    t0 = time.perf_counter()
    checks = failures = 0
    first_bad = None
    for K in corpus():
        for m in range(max(K.ambient_dim - 1, 1), CORPUS.m_max + 1):
            r = verify_reduced_identity(K, m)
            checks += 1
            if not r.holds:
                failures += 1
                first_bad = first_bad or (K.name, m, r.counterexample)
    elapsed = time.perf_counter() - t0
    dims = sorted({K.ambient_dim for K in corpus()})
    ok = failures == 0 and len(corpus()) >= 200 and elapsed <= 300
    detail = (f"{len(corpus())} polytopes (dims {dims[0]}-{dims[-1]}), {checks} (K, m) checks, "
              f"{failures} failures, {elapsed:.1f}s")
    if first_bad:
        detail += f"; first failure {first_bad}"
    return ok, detail


def criterion_2():
    sims = empty_simplices()
    bad = [K for K in sims if not verify_empty_simplex_identity(K).holds]
    nonunimodular = sum(sum(empty_triangulation(K).volumes()) > 1 for K in sims)
    ok = not bad and len(sims) >= 100
    return ok, f"{len(sims)} empty simplices ({nonunimodular} non-unimodular), {len(bad)} failures"


def criterion_3():
    points = failures = 0
    for K in corpus():
        for m in range(1, CORPUS.m_max + 1):
            batch = decompose_all(K, m, EFFECTIVE)
            good = batch.verify()
            points += len(batch)
            failures += int((~good).sum())
            if len(batch) != len(lattice_points(K, m)):
                failures += 1
    return failures == 0, f"{points} decompositions re-verified over m = 1..{CORPUS.m_max}, {failures} failures"


def criterion_4():
    t0 = time.perf_counter()
    expected = {4: Fraction(5, 2), 5: Fraction(17, 5)}
    reports = [verify_sharpness(SHARP4), verify_sharpness(SHARP5)]
    elapsed = time.perf_counter() - t0
    ok = all(r.passed and r.mass == expected[r.params.n] for r in reports) and elapsed <= 60
    masses = ", ".join(f"n={r.params.n}: mass {r.mass}" for r in reports)
    return ok, f"{masses}; all claims {'hold' if ok else 'DO NOT hold'}; {elapsed:.2f}s"


def criterion_5():
    K = REEVE
    s = is_solid(K)
    holes = cone_holes(VertexCone(K, (0, 0, 0)))
    first = next((h for h in holes if h.point == (1, 1, 1)), None)
    loc = locally_solid_check(K)
    ok = (s.verdict is Verdict.NOT_SOLID and s.dilation == 2 and s.point == (1, 1, 1)
          and first is not None and first.multiplier == 2
          and loc.verdict is Verdict.NOT_LOCALLY_SOLID)
    return ok, (f"is_solid: {s.verdict.value} m={s.dilation} point={s.point}; "
                f"hole (1,1,1) multiplier {first.multiplier if first else None}; "
                f"locally_solid_check: {loc.verdict.value}")


def criterion_6():
    bad = []
    for n in range(1, 5):
        for m in range(0, 7):
            if len(lattice_points(_unit_simplex(n), m)) != math.comb(m + n, n):
                bad.append(("simplex", n, m))
    for n in range(1, 4):
        for m in range(0, 5):
            if len(lattice_points(_unit_cube(n), m)) != (m + 1) ** n:
                bad.append(("cube", n, m))
    return not bad, f"35 simplex counts and 15 cube counts, mismatches: {bad or 'none'}"


def _cells_empty(T) -> bool:
    S = T.points.as_array(np.int64)
    Y = T.polytope.chart.coords_array(S, 1)
    Yh = np.hstack([Y, np.ones((len(S), 1), dtype=Y.dtype)])
    for cell, (_, adj) in zip(T.cells, T.complex.adj):
        inside = np.flatnonzero((Yh @ np.array(adj, dtype=np.int64).T >= 0).all(axis=1))
        if sorted(inside.tolist()) != sorted(cell):
            return False
    return True


def criterion_7():
    bad = []
    cells = 0
    for K in corpus():
        T = empty_triangulation(K)
        cells += len(T)
        used = {i for c in T.cells for i in c}
        if not _cells_empty(T) or sum(T.volumes()) != vertex_volume(K) or used != set(range(len(T.points))):
            bad.append(K.name)
    return not bad, f"{len(corpus())} triangulations, {cells} cells, failures: {bad or 'none'}"


def criterion_8():
    raised = []
    runs = 0
    examples = (REEVE, sharpness_simplex(SHARP4), sharpness_simplex(SHARP5))
    families = [("corpus", corpus(), CORPUS.m_max), ("empty simplices", empty_simplices(), 6),
                ("examples", examples, 6)]
    for label, polys, m_max in families:
        for K in polys:
            for mode in (EFFECTIVE, AMBIENT):
                for m in range(1, m_max + 1):
                    runs += 1
                    try:
                        decompose_all(K, m, mode)
                    except EmptinessViolated as exc:
                        raised.append((label, K.name, m, mode, str(exc)))
    return not raised, f"{runs} batch decompositions in both modes, EmptinessViolated raised {len(raised)} times"


def _cli_transcript(workdir: Path) -> bytes:
    """Run a fixed set of commands in fresh processes and collect all output."""
    files = {
        "t2.json": '{"name": "T2", "dim": 2, "points": [[0, 0], [1, 0], [0, 1]]}',
        "reeve.json": '{"name": "reeve", "dim": 3, "points": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 2]]}',
        "hexagon.json": '{"dim": 2, "points": [[1, 0], [2, 0], [3, 1], [2, 2], [1, 2], [0, 1]]}',
    }
    for name, text in files.items():
        (workdir / name).write_text(text + "\n")
    cmds = []
    for f in ("t2.json", "reeve.json", "hexagon.json"):
        cmds += [
            ["points", "--polytope", f, "--dilation", "3"],
            ["points", "--polytope", f, "--dilation", "2", "--json"],
            ["verify", "--polytope", f, "--m-max", "4"],
            ["verify", "--polytope", f, "--m-max", "4", "--json"],
            ["triangulate", "--polytope", f],
            ["triangulate", "--polytope", f, "--json"],
            ["atoms", "--polytope", f, "--json"],
        ]
        cmds += [["check", which, "--polytope", f] for which in ("solid", "locally-solid", "empty", "faithful")]
        cmds += [["check", which, "--polytope", f, "--json"] for which in ("solid", "locally-solid")]
    cmds += [
        ["decompose", "--polytope", "t2.json", "--dilation", "3", "--point", "2,1"],
        ["decompose", "--polytope", "reeve.json", "--dilation", "3", "--point", "2,2,2", "--json"],
        ["decompose", "--polytope", "reeve.json", "--dilation", "4", "--point", "2,2,2", "--mode", "ambient"],
        ["decompose", "--polytope", "hexagon.json", "--dilation", "5", "--point", "7,4", "--json"],
        ["example4", "--n", "4", "--a", "1,1,1", "--d", "4", "--out", "sharp4.json"],
        ["example4", "--n", "5", "--a", "1,1,1,1", "--d", "5", "--out", "sharp5.json", "--json"],
        ["probe", "--question", "1", "--seed", str(SEED), "--count", "12", "--out", "probe.ndjson"],
        ["probe", "--question", "2", "--seed", str(SEED), "--count", "6", "--dims", "5,5", "--coords", "0,1",
         "--points", "6,8", "--out", "probe.ndjson", "--json"],
    ]
    out = bytearray()
    env = dict(os.environ, PYTHONHASHSEED="random")
    for cmd in cmds:
        proc = subprocess.run([sys.executable, "-m", "sflattice.cli", *cmd], cwd=workdir, env=env,
                              capture_output=True)
        out += f"$ {' '.join(cmd)} -> {proc.returncode}\n".encode() + proc.stdout + proc.stderr
    for name in ("sharp4.json", "sharp5.json", "probe.ndjson"):
        out += f"# {name}\n".encode() + (workdir / name).read_bytes()
    return bytes(out)


def criterion_9():
    runs = []
    for _ in range(2):
        with tempfile.TemporaryDirectory() as d:
            runs.append(_cli_transcript(Path(d)))
    codes_ok = b"-> 0\n" in runs[0] and all(
        line.endswith(b"-> 0") for line in runs[0].splitlines() if line.startswith(b"$ "))
    ok = runs[0] == runs[1] and codes_ok
    n_cmds = sum(line.startswith(b"$ ") for line in runs[0].splitlines())
    return ok, (f"{n_cmds} commands run twice in fresh processes, {len(runs[0])} bytes, "
                f"{'identical' if runs[0] == runs[1] else 'DIFFERENT'}, all exit 0: {codes_ok}")


CRITERIA = {
    1: ("reduced identity over the random corpus", criterion_1),
    2: ("empty-simplex identity", criterion_2),
    3: ("decomposition soundness", criterion_3),
    4: ("sharpness reproduction", criterion_4),
    5: ("Reeve non-solidity", criterion_5),
    6: ("counting oracles", criterion_6),
    7: ("triangulation integrity", criterion_7),
    8: ("peeling never fails", criterion_8),
    9: ("byte-identical CLI output", criterion_9),
}


def format_line(k: int, ok: bool, detail: str) -> str:
    return f"criterion {k} [{'PASS' if ok else 'FAIL'}] {CRITERIA[k][0]}: {detail}"


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    ok, detail = CRITERIA[k][1]()
    RESULTS[k] = (ok, detail)
    print(format_line(k, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    status = 0
    for k in sorted(CRITERIA):
        ok, detail = CRITERIA[k][1]()
        print(format_line(k, ok, detail), flush=True)
        status |= not ok
    sys.exit(status)
