"""``sf-lattice`` command-line interface.

Polytopes are read from JSON files of the form
``{"name": "...", "dim": n, "points": [[...], ...]}`` (``name`` optional,
integers only).  Every command prints deterministic plain text, or JSON
with ``--json``.

Exit codes: 0 success, 2 input error, 3 dimension mismatch, 4 point not in
the dilate, 5 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .corpus import RunConfig, random_polytopes
from .decomposition import (
    AMBIENT,
    EFFECTIVE,
    EmptinessViolated,
    NotInDilate,
    decompose,
    verify_ambient_identity,
    verify_empty_simplex_identity,
    verify_reduced_identity,
)
from .exact import DimensionMismatch
from .polytope import (
    LatticePolytope,
    PointSet,
    is_empty_polytope,
    is_projectively_faithful,
    lattice_points_array,
    member,
    minkowski_sum,
)
from .solidity import (
    NotInCone,
    SharpnessParams,
    VertexCone,
    Verdict,
    equality_profile,
    is_atom,
    is_solid,
    locally_solid_check,
    sharpness_simplex,
    verify_sharpness,
)
from .triangulation import empty_triangulation, vertex_volume

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DIMENSION = 3
EXIT_MEMBERSHIP = 4
EXIT_INVARIANT = 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------- file I/O

def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def parse_polytope(doc, source: str = "<input>") -> LatticePolytope:
    """Validate a decoded polytope document and build the polytope."""
    if not isinstance(doc, dict):
        raise CliError(EXIT_INPUT, f"{source}: top level must be an object")
    extra = set(doc) - {"name", "dim", "points"}
    if extra:
        raise CliError(EXIT_INPUT, f"{source}: unknown key(s) {', '.join(sorted(extra))}")
    for key in ("dim", "points"):
        if key not in doc:
            raise CliError(EXIT_INPUT, f"{source}: missing key '{key}'")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise CliError(EXIT_INPUT, f"{source}: 'name' must be a string")
    dim = doc["dim"]
    if not _is_int(dim) or dim < 1:
        raise CliError(EXIT_INPUT, f"{source}: 'dim' must be a positive integer, got {dim!r}")
    pts = doc["points"]
    if not isinstance(pts, list) or not pts:
        raise CliError(EXIT_INPUT, f"{source}: 'points' must be a nonempty list")
    for i, p in enumerate(pts):
        if not isinstance(p, list) or not all(_is_int(c) for c in p):
            raise CliError(EXIT_INPUT, f"{source}: points[{i}] must be a list of integers, got {p!r}")
        if len(p) != dim:
            raise CliError(EXIT_DIMENSION, f"{source}: points[{i}] has length {len(p)}, expected {dim}")
    return LatticePolytope([tuple(p) for p in pts], ambient_dim=dim, name=name)


def read_polytope(path: str) -> LatticePolytope:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"{path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INPUT, f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_polytope(doc, path)


def polytope_document(K: LatticePolytope) -> dict:
    """Canonical file document: the vertices in lex order."""
    doc = {}
    if K.name is not None:
        doc["name"] = K.name
    doc["dim"] = K.ambient_dim
    doc["points"] = [list(v) for v in K.vertices]
    return doc


def write_polytope(K: LatticePolytope, path: str) -> None:
    Path(path).write_text(json.dumps(polytope_document(K)) + "\n")


# ---------------------------------------------------------------- formatting

def csv(p: Sequence) -> str:
    return ",".join(str(c) for c in p)


def parse_csv(text: str, what: str = "point") -> tuple[int, ...]:
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError:
        raise CliError(EXIT_INPUT, f"{what} must be comma-separated integers, got {text!r}") from None


def _frac(q: Fraction) -> str:
    return str(Fraction(q))


def _emit(args, text_lines: list[str], doc) -> None:
    out = sys.stdout
    if args.json:
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        for line in text_lines:
            out.write(line + "\n")


def _need_point(K: LatticePolytope, text: str) -> tuple[int, ...]:
    x = parse_csv(text)
    if len(x) != K.ambient_dim:
        raise CliError(EXIT_DIMENSION, f"point {text} has {len(x)} coordinates, polytope has dimension {K.ambient_dim}")
    return x


def _need_dilation(m: int | None, lo: int = 1) -> int:
    if m is None:
        raise CliError(EXIT_INPUT, "--dilation is required")
    if m < lo:
        raise CliError(EXIT_INPUT, f"--dilation must be at least {lo}, got {m}")
    return m


def _report_doc(r) -> dict:
    doc = {"verdict": r.verdict.value}
    if r.dilation is not None:
        doc["dilation"] = r.dilation
    if r.point is not None:
        doc["witness"] = csv(r.point)
    if r.hole is not None:
        doc["hole"] = _hole_doc(r.hole)
    if r.faithful is not None:
        doc["faithful"] = r.faithful
    return doc


def _hole_doc(h) -> dict:
    return {"vertex": csv(h.vertex), "point": csv(h.point), "multiplier": h.multiplier,
            "summands": [csv(s) for s in h.summands], "bound": _frac(h.bound)}


def _report_line(r) -> str:
    parts = [r.verdict.value]
    if r.verdict is Verdict.NOT_SOLID:
        parts += [f"m={r.dilation}", f"witness {csv(r.point)}"]
    elif r.verdict is Verdict.LOCALLY_SOLID:
        parts.append(f"m={r.dilation}")
    elif r.verdict is Verdict.NOT_LOCALLY_SOLID:
        h = r.hole
        parts += [f"vertex {csv(h.vertex)}", f"hole {csv(h.point)}", f"multiplier {h.multiplier}"]
    return "; ".join(parts)


# ---------------------------------------------------------------- commands

def cmd_points(args) -> int:
    K = read_polytope(args.polytope)
    m = _need_dilation(args.dilation)
    pts = [tuple(int(c) for c in row) for row in lattice_points_array(K, m).tolist()]
    _emit(args, [csv(p) for p in pts], {"dilation": m, "count": len(pts), "points": [list(p) for p in pts]})
    return EXIT_OK


def cmd_decompose(args) -> int:
    K = read_polytope(args.polytope)
    m = _need_dilation(args.dilation)
    if args.point is None:
        raise CliError(EXIT_INPUT, "--point is required")
    x = _need_point(K, args.point)
    try:
        dec = decompose(K, x, m, mode=args.mode)
    except NotInDilate:
        raise CliError(EXIT_MEMBERSHIP, f"point not in mK: {csv(x)} is not in {m}K") from None
    except EmptinessViolated as exc:
        raise CliError(EXIT_INVARIANT, f"internal invariant violated: {exc}") from None
    # Never print an unverified certificate.
    if not dec.verify(K) or member(K, dec.head, dec.head_dilation) is None:
        raise CliError(EXIT_INVARIANT, "internal invariant violated: decomposition failed re-verification")
    terms = {csv(K.vertices[j]): _frac(c) for j, c in sorted(dec.head_witness.terms.items())}
    doc = {
        "target": csv(dec.target),
        "dilation": dec.dilation,
        "mode": args.mode,
        "head": csv(dec.head),
        "head_dilation": dec.head_dilation,
        "head_witness": {"mass": _frac(dec.head_witness.mass), "terms": terms},
        "parts": [csv(p) for p in dec.parts],
    }
    lines = [
        f"target: {doc['target']}",
        f"dilation: {dec.dilation}",
        f"head: {doc['head']}",
        f"head_dilation: {dec.head_dilation}",
        "head_witness: " + " + ".join(f"{c}*({v})" for v, c in terms.items()),
        "parts: " + (" ".join(doc["parts"]) if dec.parts else "(none)"),
        "verified: yes",
    ]
    _emit(args, lines, doc)
    return EXIT_OK


def cmd_verify(args) -> int:
    K = read_polytope(args.polytope)
    n = K.ambient_dim
    m_max = args.m_max if args.m_max is not None else max(n, 2) + 1
    if m_max < 1:
        raise CliError(EXIT_INPUT, f"--m-max must be at least 1, got {m_max}")
    reports = []
    for m in range(max(n - 1, 1), m_max + 1):
        reports.append(verify_reduced_identity(K, m))
    for m in range(n, m_max + 1):
        reports.append(verify_ambient_identity(K, m))
    if K.is_simplex() and K.affine_dim >= 2 and is_empty_polytope(K):
        reports.append(verify_empty_simplex_identity(K))
    lines = [f"{'identity':<14} {'m':>3} {'result':<6} {'lhs':>8} {'rhs':>8}  counterexample"]
    rows = []
    for r in reports:
        bad = f"{csv(r.counterexample)} ({r.counterexample_side})" if r.counterexample is not None else "-"
        lines.append(f"{r.name:<14} {r.dilation:>3} {'pass' if r.holds else 'FAIL':<6} "
                     f"{r.lhs_size:>8} {r.rhs_size:>8}  {bad}")
        rows.append({"identity": r.name, "m": r.dilation, "holds": r.holds, "lhs": r.lhs_size,
                     "rhs": r.rhs_size,
                     "counterexample": csv(r.counterexample) if r.counterexample is not None else None,
                     "side": r.counterexample_side})
    _emit(args, lines, {"rows": rows})
    return EXIT_OK if all(r.holds for r in reports) else EXIT_INVARIANT


def cmd_check(args) -> int:
    K = read_polytope(args.polytope)
    which = args.which
    if which == "solid":
        r = is_solid(K)
        _emit(args, [_report_line(r)], _report_doc(r))
    elif which == "locally-solid":
        r = locally_solid_check(K, m_max=args.m_max, hole_bound=args.bound)
        _emit(args, [_report_line(r)], _report_doc(r))
    else:
        value = is_empty_polytope(K) if which == "empty" else is_projectively_faithful(K)
        _emit(args, ["true" if value else "false"], {which: value})
    return EXIT_OK


def cmd_triangulate(args) -> int:
    K = read_polytope(args.polytope)
    T = empty_triangulation(K)
    vols = T.volumes()
    lines = []
    cells = []
    for i, (cell, vol) in enumerate(zip(T.simplices, vols)):
        lines.append(f"cell {i}: {' | '.join(csv(v) for v in cell.vertices)}  volume {vol}")
        cells.append({"vertices": [csv(v) for v in cell.vertices], "volume": vol})
    total = vertex_volume(K)
    lines.append(f"cells: {len(cells)}  total volume: {sum(vols)}  polytope volume: {total}")
    _emit(args, lines, {"cells": cells, "total_volume": sum(vols), "polytope_volume": total})
    return EXIT_OK if sum(vols) == total else EXIT_INVARIANT


def cmd_example4(args) -> int:
    if args.n is None or args.a is None or args.d is None:
        raise CliError(EXIT_INPUT, "--n, --a and --d are required")
    try:
        params = SharpnessParams(args.n, parse_csv(args.a, "--a"), args.d)
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    K = sharpness_simplex(params)
    out = args.out or f"sharpness-n{params.n}.json"
    write_polytope(K, out)
    r = verify_sharpness(params)
    yes = {True: "yes", False: "no"}
    lines = [
        f"file: {out}",
        f"ones in {params.n - 1}K: {yes[r.in_top]}",
        f"ones in {params.n - 2}K: {yes[r.in_below]}",
        f"mass: {_frac(r.mass)} (expected {_frac(r.expected_mass)})",
        f"atom: {yes[r.atom]}",
        f"sharpness: {'pass' if r.passed else 'FAIL'}",
    ]
    doc = {"file": out, "in_top": r.in_top, "in_below": r.in_below, "mass": _frac(r.mass),
           "expected_mass": _frac(r.expected_mass), "atom": r.atom, "passed": r.passed}
    _emit(args, lines, doc)
    return EXIT_OK if r.passed else EXIT_INVARIANT


def _probe_record(K: LatticePolytope, question: int, m_max: int | None, bound) -> dict:
    rec = {"name": K.name, "dim": K.ambient_dim, "vertices": [csv(v) for v in K.vertices]}
    n = K.ambient_dim
    if question == 1:
        loc = locally_solid_check(K, m_max=m_max, hole_bound=bound)
        sol = is_solid(K)
        rec["locally_solid"] = loc.verdict.value
        rec["solid"] = sol.verdict.value
        rec["candidate"] = loc.verdict is Verdict.LOCALLY_SOLID and sol.verdict is Verdict.NOT_SOLID
        return rec
    window = [m for m in range(n // 2 + 1, n - 1) if 2 * m > n]
    if not window:
        rec["status"] = "vacuous"
        rec["candidate"] = False
        return rec
    hits = [m for m, eq in equality_profile(K, window[-1]) if m in window and eq]
    rec["equal_in_window"] = hits
    if not hits:
        rec["candidate"] = False
        return rec
    loc = locally_solid_check(K, m_max=m_max, hole_bound=bound)
    rec["locally_solid"] = loc.verdict.value
    rec["candidate"] = loc.verdict is Verdict.NOT_LOCALLY_SOLID
    return rec


def cmd_probe(args) -> int:
    if args.question not in (1, 2):
        raise CliError(EXIT_INPUT, f"--question must be 1 or 2, got {args.question}")
    dims = parse_csv(args.dims, "--dims")
    coords = parse_csv(args.coords, "--coords")
    npts = parse_csv(args.points, "--points")
    if len(dims) != 2 or len(coords) != 2 or len(npts) != 2:
        raise CliError(EXIT_INPUT, "--dims, --coords and --points take two values lo,hi")
    try:
        cfg = RunConfig(seed=args.seed, dims=dims, points=npts, coords=coords,
                        m_max=args.m_max or 1, count=args.count, hole_bound=args.bound)
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    records = []
    for K in random_polytopes(cfg):
        if not (K.affine_dim == K.ambient_dim and is_projectively_faithful(K)):
            continue
        records.append(_probe_record(K, args.question, args.m_max, args.bound))
    if args.out:
        with open(args.out, "a") as fh:
            for rec in records:
                fh.write(json.dumps({"question": args.question, "seed": args.seed, **rec}) + "\n")
    candidates = [r for r in records if r["candidate"]]
    lines = [f"question {args.question}; seed {args.seed}; examined {len(records)} of {cfg.count}"]
    lines += [f"candidate: {r['name']} {' | '.join(r['vertices'])}" for r in candidates]
    if not candidates:
        lines.append("no candidates")
    _emit(args, lines, {"question": args.question, "seed": args.seed, "generated": cfg.count,
                        "examined": len(records), "candidates": candidates})
    return EXIT_OK


def _cone_atoms(C: VertexCone, bound: int) -> list[tuple[int, ...]]:
    """Atoms of the saturated vertex cone with ``phi <= bound``.

    The cone cut at ``phi <= t`` lies inside ``t(K - v)``, so scanning that
    dilate sees every element, and a sum of two nonzero elements with
    ``phi <= bound`` is itself among them.
    """
    E = C.dilate_points(bound)
    keep = [tuple(int(c) for c in row) for row in E.tolist() if C.value(row) <= bound]
    zero = (0,) * C.K.ambient_dim
    nonzero = PointSet.of([p for p in keep if p != zero], C.K.ambient_dim)
    if not len(nonzero):
        return []
    sums = set(minkowski_sum(nonzero, nonzero).points)
    return [p for p in nonzero if p not in sums]


def cmd_atoms(args) -> int:
    K = read_polytope(args.polytope)
    v = parse_csv(args.vertex, "--vertex") if args.vertex else K.vertices[0]
    if len(v) != K.ambient_dim:
        raise CliError(EXIT_DIMENSION, f"vertex {csv(v)} has {len(v)} coordinates, expected {K.ambient_dim}")
    if v not in K.vertices:
        raise CliError(EXIT_INPUT, f"{csv(v)} is not a vertex")
    C = VertexCone(K, v)
    if args.point is not None:
        x = _need_point(K, args.point)
        try:
            atom = is_atom(C, x)
        except NotInCone as exc:
            raise CliError(EXIT_MEMBERSHIP, str(exc)) from None
        _emit(args, ["atom" if atom else "not atom"], {"vertex": csv(v), "point": csv(x), "atom": atom})
        return EXIT_OK
    bound = args.bound if args.bound is not None else math.ceil(C.default_bound())
    if bound < 1:
        raise CliError(EXIT_INPUT, f"--bound must be at least 1, got {bound}")
    atoms = _cone_atoms(C, bound)
    lines = [f"vertex {csv(v)}; bound {bound}; atoms {len(atoms)}"] + [csv(a) for a in atoms]
    _emit(args, lines, {"vertex": csv(v), "bound": bound, "atoms": [csv(a) for a in atoms]})
    return EXIT_OK


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_INPUT, f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sf-lattice", description="Exact lattice-polytope decompositions and checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help, polytope=True):
        sp = sub.add_parser(name, help=help)
        if polytope:
            sp.add_argument("--polytope", required=True, help="polytope JSON file")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=func)
        return sp

    sp = command("points", cmd_points, "list the lattice points of mK")
    sp.add_argument("--dilation", type=int, help="m (default 1)")

    sp = command("decompose", cmd_decompose, "split a lattice point of mK")
    sp.add_argument("--dilation", type=int, help="m")
    sp.add_argument("--point", help="comma-separated; write --point=-1,0 for a leading minus")
    sp.add_argument("--mode", choices=[EFFECTIVE, AMBIENT], default=EFFECTIVE,
                    help="head dilation from the affine (effective) or ambient dimension")

    sp = command("verify", cmd_verify, "brute-force check of the sumset identities")
    sp.add_argument("--m-max", type=int, help="largest dilation checked (default max(n, 2) + 1)")

    sp = command("check", cmd_check, "solidity, emptiness or faithfulness")
    sp.add_argument("which", choices=["solid", "locally-solid", "empty", "faithful"])
    sp.add_argument("--m-max", type=int, help="largest m tried in the equality test (locally-solid)")
    sp.add_argument("--bound", type=int, help="functional bound for the hole search (locally-solid)")

    command("triangulate", cmd_triangulate, "empty triangulation with cell volumes")

    sp = command("example4", cmd_example4, "build a sharpness simplex and check it", polytope=False)
    sp.add_argument("--n", type=int, help="ambient dimension, at least 4")
    sp.add_argument("--a", help="n - 1 comma-separated integers with 0 < a(i) < d and sum(a) < d")
    sp.add_argument("--d", type=int, help="last coordinate of the apex")
    sp.add_argument("--out", help="where to write the simplex (default sharpness-n<n>.json)")

    sp = command("probe", cmd_probe, "seeded search for answers to the open questions", polytope=False)
    sp.add_argument("--question", type=int, required=True,
                    help="1: locally solid but not solid; 2: equality for some n/2 < m < n-1 but not locally solid")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=20, help="polytopes generated")
    sp.add_argument("--dims", default="2,3", help="dimension range lo,hi")
    sp.add_argument("--points", default="3,6", help="random points per polytope lo,hi")
    sp.add_argument("--coords", default="0,2", help="coordinate range lo,hi")
    sp.add_argument("--m-max", type=int, help="largest m tried in the equality test (locally-solid)")
    sp.add_argument("--bound", type=int, help="functional bound for the hole search (locally-solid)")
    sp.add_argument("--out", help="append per-polytope results here (NDJSON)")

    sp = command("atoms", cmd_atoms, "atoms of a vertex cone")
    sp.add_argument("--vertex", help="apex of the cone (default the first vertex)")
    sp.add_argument("--point", help="report whether this cone point is an atom")
    sp.add_argument("--bound", type=int, help="list atoms with functional value up to this")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except DimensionMismatch as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DIMENSION


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
