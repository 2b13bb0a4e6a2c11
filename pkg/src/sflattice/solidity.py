"""Solidity, local solidity and vertex cones.

The vertex cone at ``v`` is the monoid generated by ``K ∩ Z^n - v``.  Every
cone carries a rational functional ``phi`` that is at least ``delta > 0`` on
all nonzero generators, so a point ``y`` of the monoid is a sum of at most
``phi(y) / delta`` generators; this turns membership into a finite search.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .exact import UnderdeterminedSystem, rat_solve
from .polytope import (
    LatticePolytope,
    Point,
    PointSet,
    _decode,
    _encode,
    is_projectively_faithful,
    k_fold_sumset,
    lattice_points,
    lattice_points_array,
    member,
    minkowski_sum,
)


class Verdict(str, enum.Enum):
    SOLID = "solid"
    NOT_SOLID = "not solid"
    LOCALLY_SOLID = "locally solid"
    NOT_LOCALLY_SOLID = "not locally solid"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class HoleReport:
    vertex: Point
    point: Point
    multiplier: int
    summands: tuple[Point, ...]
    bound: Fraction


@dataclass(frozen=True)
class SolidityReport:
    verdict: Verdict
    dilation: Optional[int] = None
    point: Optional[Point] = None
    hole: Optional[HoleReport] = None
    faithful: Optional[bool] = None


class NotFaithful(ValueError):
    pass


class NotInCone(ValueError):
    pass


def _dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def _separating_functional(K: LatticePolytope, v: Point) -> tuple[Fraction, ...]:
    """Rational ``phi`` on R^n with ``phi(u - v) >= 1`` for every other vertex
    ``u``: the first vertex (in subset order) of ``{phi : A phi >= 1}`` in
    chart coordinates, pulled back to the ambient space."""
    d = K.affine_dim
    n = K.ambient_dim
    if d == 0:
        return (Fraction(0),) * n
    rows = [K.chart.coords(u, 1) for u in K.vertices if u != v]
    rows = [tuple(a - b for a, b in zip(r, K.chart.coords(v, 1))) for r in rows]
    for subset in itertools.combinations(range(len(rows)), d):
        try:
            phi = rat_solve([rows[i] for i in subset], [1] * d)
        except UnderdeterminedSystem:
            continue
        if phi is not None and all(_dot(r, phi) >= 1 for r in rows):
            Ud = K.chart.U[:d]
            return tuple(sum(phi[i] * Ud[i][j] for i in range(d)) for j in range(n))
    raise ValueError(f"{v} is not a vertex")  # pragma: no cover


class VertexCone:
    """Lattice cone at a vertex ``v``: sums of points of ``K ∩ Z^n - v``."""

    def __init__(self, K: LatticePolytope, v: Sequence[int]):
        v = tuple(int(c) for c in v)
        if v not in K.vertices:
            raise ValueError(f"{v} is not a vertex of the polytope")
        self.K = K
        self.vertex = v
        self.generators = PointSet.of((tuple(a - b for a, b in zip(p, v)) for p in lattice_points(K, 1)),
                                      K.ambient_dim)
        self.phi = _separating_functional(K, v)
        q = 1
        for c in self.phi:
            q = math.lcm(q, c.denominator)
        # Integral copy: phi(y) = phi_num . y / phi_den.
        self.phi_den = q
        self.phi_num = tuple(int(c * q) for c in self.phi)
        values = [self.value(g) for g in self.nonzero_generators]
        self.delta = min(values) if values else Fraction(1)
        self.max_value = max(values) if values else Fraction(0)
        self._monoid = None

    @cached_property
    def nonzero_generators(self) -> tuple[Point, ...]:
        zero = (0,) * self.K.ambient_dim
        return tuple(g for g in self.generators if g != zero)

    def value(self, y: Sequence) -> Fraction:
        return Fraction(_dot(self.phi_num, y), self.phi_den)

    def default_bound(self) -> Fraction:
        # At least 1 so that the trivial cone of a point still scans.
        return max(2 * (self.K.affine_dim + 1) * self.max_value, Fraction(1))

    def in_rational_cone(self, y: Sequence) -> bool:
        t = self.value(y)
        if t < 0:
            return False
        # y lies in the cone over K - v iff y + t v lies in tK.
        return member(self.K, [yi + t * vi for yi, vi in zip(y, self.vertex)], t) is not None

    def representation(self, y: Sequence) -> Optional[dict[Point, Fraction]]:
        """Nonnegative rational weights on ``u - v`` (vertices u != v) summing to ``y``."""
        t = self.value(y)
        if t < 0:
            return None
        w = member(self.K, [yi + t * vi for yi, vi in zip(y, self.vertex)], t)
        if w is None:
            return None
        V = self.K.vertices.points
        return {tuple(a - b for a, b in zip(V[i], self.vertex)): lam
                for i, lam in w.terms.items() if V[i] != self.vertex}

    def dilate_points(self, t: int) -> np.ndarray:
        """Lattice points of ``t (K - v)``, which contain every cone point
        with ``phi <= t``."""
        X = np.array(lattice_points_array(self.K, t))
        return X - t * np.array(self.vertex, dtype=X.dtype)

    def _box(self, t: int) -> tuple[np.ndarray, np.ndarray]:
        """Integral box containing ``t (K - v)``."""
        D = np.array(self.K.vertices.points, dtype=np.int64) - np.array(self.vertex, dtype=np.int64)
        return t * D.min(axis=0), t * D.max(axis=0) - t * D.min(axis=0) + 1

    def _grow(self, bound: Fraction) -> None:
        """Make the cached monoid cover every element with ``phi <= bound``."""
        if self._monoid is not None and self._monoid[0] >= bound:
            return
        if self._monoid is not None:
            bound = max(bound, 2 * self._monoid[0])
        n = self.K.ambient_dim
        lo, widths = self._box(max(math.ceil(bound), 1))
        if math.prod(int(w) for w in widths) >= kernels.INT64_SAFE:
            raise OverflowError("cone scan region is too large for 64-bit keys")
        lim = math.floor(bound * self.phi_den)
        phi = np.array(self.phi_num, dtype=np.int64)
        G = np.array(self.nonzero_generators, dtype=np.int64).reshape(-1, n)
        frontier = np.zeros((1, n), dtype=np.int64)
        seen = _encode(frontier, lo, widths)
        # Breadth-first over the number of summands; phi grows by at least
        # delta per summand, so this stops after lim / delta rounds.
        while frontier.shape[0] and G.shape[0]:
            nxt = (frontier[:, None, :] + G[None, :, :]).reshape(-1, n)
            nxt = nxt[nxt @ phi <= lim]
            fresh = np.setdiff1d(np.unique(_encode(nxt, lo, widths)), seen, assume_unique=True)
            seen = np.union1d(seen, fresh)
            frontier = _decode(fresh, lo, widths)
        self._monoid = (Fraction(bound), lo, widths, seen)

    def in_monoid(self, Y: np.ndarray) -> np.ndarray:
        """Row-wise cone monoid membership for an integer array."""
        Y = np.asarray(Y, dtype=np.int64).reshape(-1, self.K.ambient_dim)
        if Y.shape[0] == 0:
            return np.zeros(0, dtype=bool)
        top = Fraction(int((Y @ np.array(self.phi_num, dtype=np.int64)).max()), self.phi_den)
        self._grow(max(top, Fraction(0)))
        _, lo, widths, keys = self._monoid
        inside = ((Y >= lo) & (Y < lo + widths)).all(axis=1)
        out = np.zeros(Y.shape[0], dtype=bool)
        if inside.any():
            k = _encode(Y[inside], lo, widths)
            pos = np.minimum(np.searchsorted(keys, k), len(keys) - 1)
            out[inside] = keys[pos] == k
        return out

    def monoid_points(self, bound) -> set:
        """All elements of the cone monoid with ``phi <= bound``."""
        bound = Fraction(bound)
        self._grow(bound)
        _, lo, widths, keys = self._monoid
        X = _decode(keys, lo, widths)
        X = X[X @ np.array(self.phi_num, dtype=np.int64) <= bound * self.phi_den]
        return {tuple(r) for r in X.tolist()}


def _summands(C: VertexCone, y: Point) -> tuple[Point, ...]:
    """Split a monoid element into generators: repeatedly remove the first
    generator (lex order) whose remainder is still in the monoid."""
    zero = (0,) * len(y)
    out = []
    p = y
    while p != zero:
        cand = np.array(p, dtype=np.int64) - np.array(C.nonzero_generators, dtype=np.int64)
        j = int(np.flatnonzero(C.in_monoid(cand))[0])
        out.append(C.nonzero_generators[j])
        p = tuple(int(c) for c in cand[j])
    return tuple(sorted(out))


def cone_member(C: VertexCone, y: Sequence[int]) -> Optional[tuple[Point, ...]]:
    """Explicit lex-sorted summands of ``y`` from the nonzero generators, or
    ``None`` when ``y`` is not in the cone monoid.

    A decision: an element with ``phi(y) = t`` is a sum of at most
    ``t / delta`` generators, and the monoid is enumerated up to ``t``.
    """
    y = tuple(int(c) for c in y)
    if C.value(y) < 0 or not C.in_monoid(np.array([y]))[0]:
        return None
    return _summands(C, y)


def _multipliers(C: VertexCone, holes: list[Point]) -> list[tuple[int, tuple[Point, ...]]]:
    """Least ``k >= 2`` with ``k x`` in the monoid, for each hole ``x``.

    Clearing the denominators of the rational representation of ``x`` on the
    edge directions gives a multiple ``k0`` that always works, so the search
    stops there.
    """
    k0s = []
    for x in holes:
        k0 = 1
        for lam in C.representation(x).values():
            k0 = math.lcm(k0, lam.denominator)
        k0s.append(k0)
    found: dict[int, int] = {}
    X = np.array(holes, dtype=np.int64).reshape(-1, C.K.ambient_dim)
    for k in range(2, max(k0s, default=1)):
        todo = [i for i in range(len(holes)) if i not in found and k < k0s[i]]
        if not todo:
            break
        hit = C.in_monoid(k * X[todo])
        for i, h in zip(todo, hit):
            if h:
                found[i] = k
    out = []
    for i, x in enumerate(holes):
        k = found.get(i, k0s[i])
        out.append((k, _summands(C, tuple(k * c for c in x))))
    return out


def cone_holes(C: VertexCone, bound=None) -> list[HoleReport]:
    """Lattice points of the rational cone with ``phi <= bound`` that are not
    in the cone monoid, each with a multiple that is."""
    if bound is None:
        bound = C.default_bound()
    if bound < 1:
        raise ValueError("bound must be at least 1")
    bound = Fraction(bound)
    X = C.dilate_points(math.ceil(bound))
    phi = np.array(C.phi_num, dtype=X.dtype)
    X = X[X @ phi <= bound * C.phi_den]
    X = X[~C.in_monoid(X)] if X.shape[0] else X
    holes = sorted(tuple(int(c) for c in row) for row in X.tolist())
    return [HoleReport(C.vertex, x, k, summands, bound)
            for x, (k, summands) in zip(holes, _multipliers(C, holes))]


def is_atom(C: VertexCone, x: Sequence[int], within: str = "saturation") -> bool:
    """Is ``x`` a nonzero element that is not a sum of two nonzero elements?

    ``within="saturation"`` uses all lattice points of the rational cone
    (the union of ``iK_v ∩ Z^n``); ``within="monoid"`` uses the cone monoid.
    """
    x = tuple(int(c) for c in x)
    zero = (0,) * len(x)
    if x == zero:
        raise NotInCone("zero is never an atom")
    t = C.value(x)
    if within == "saturation":
        if not C.in_rational_cone(x):
            raise NotInCone(f"{x} is not in the rational cone")
        # y and x - y in the cone force phi(y), phi(x - y) <= phi(x).
        elems = {tuple(r) for r in C.dilate_points(max(math.ceil(t), 1)).tolist()}
    elif within == "monoid":
        if cone_member(C, x) is None:
            raise NotInCone(f"{x} is not in the cone monoid")
        elems = C.monoid_points(t)
    else:
        raise ValueError(f"unknown cone {within!r}")
    for y in elems:
        if y == zero or y == x:
            continue
        if tuple(a - b for a, b in zip(x, y)) in elems:
            return False
    return True


def is_solid(K: LatticePolytope) -> SolidityReport:
    """Compare ``mK ∩ Z^n`` with ``m(K ∩ Z^n)`` for ``m = 2..max(2, d-1)``;
    equality there extends to every ``m``."""
    S = lattice_points(K, 1)
    for m in range(2, max(2, K.affine_dim - 1) + 1):
        lhs = lattice_points(K, m)
        rhs = k_fold_sumset(S, m)
        if lhs != rhs:
            bad = min(set(lhs.points) - set(rhs.points))
            return SolidityReport(Verdict.NOT_SOLID, m, bad)
    return SolidityReport(Verdict.SOLID)


def equality_profile(K: LatticePolytope, m_max: int) -> list[tuple[int, bool]]:
    """``(m, mK ∩ Z^n == m(K ∩ Z^n))`` for ``m = 1..m_max``."""
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    S = lattice_points(K, 1)
    out = []
    acc = S
    for m in range(1, m_max + 1):
        if m > 1:
            acc = minkowski_sum(acc, S)
        out.append((m, lattice_points(K, m) == acc))
    return out


def locally_solid_check(K: LatticePolytope, m_max: int | None = None, hole_bound=None,
                        require_faithful: bool = False) -> SolidityReport:
    """Semi-decision for local solidity.

    YES if ``mK ∩ Z^n = m(K ∩ Z^n)`` for some ``m`` in ``[n-1, m_max]``;
    NO if a hole is found in some vertex cone within ``hole_bound``;
    UNKNOWN otherwise.  Neither direction needs projective faithfulness;
    ``require_faithful=True`` rejects non-faithful input anyway.
    """
    faithful = is_projectively_faithful(K)
    if require_faithful and not faithful:
        raise NotFaithful("polytope is not projectively faithful")
    n = K.ambient_dim
    lo = max(n - 1, 1)
    if m_max is None:
        m_max = lo + 1
    for m, equal in equality_profile(K, m_max):
        if m >= lo and equal:
            return SolidityReport(Verdict.LOCALLY_SOLID, dilation=m, faithful=faithful)
    for v in K.vertices:
        C = VertexCone(K, v)
        holes = cone_holes(C, hole_bound if hole_bound is not None else C.default_bound())
        if holes:
            return SolidityReport(Verdict.NOT_LOCALLY_SOLID, hole=holes[0], faithful=faithful)
    return SolidityReport(Verdict.UNKNOWN, faithful=faithful)


@dataclass(frozen=True)
class SharpnessParams:
    n: int
    a: tuple[int, ...]
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(c) for c in self.a))
        if self.n < 4:
            raise ValueError(f"n must be at least 4, got {self.n}")
        if len(self.a) != self.n - 1:
            raise ValueError(f"a must have n - 1 = {self.n - 1} entries, got {len(self.a)}")
        for i, ai in enumerate(self.a):
            if not 0 < ai < self.d:
                raise ValueError(f"need 0 < a({i + 1}) < d, got a({i + 1}) = {ai}, d = {self.d}")
        if sum(self.a) >= self.d:
            raise ValueError(f"need sum(a) < d, got sum(a) = {sum(self.a)}, d = {self.d}")


def sharpness_simplex(p: SharpnessParams) -> LatticePolytope:
    """The simplex with vertices ``0, e_1, ..., e_{n-1}, (a; d)`` in Z^n."""
    n = p.n
    pts = [(0,) * n]
    pts += [tuple(int(i == j) for j in range(n)) for i in range(n - 1)]
    pts.append(p.a + (p.d,))
    return LatticePolytope(pts, name=f"sharpness n={n} a={','.join(map(str, p.a))} d={p.d}")


@dataclass(frozen=True)
class SharpnessReport:
    params: SharpnessParams
    in_top: bool
    in_below: bool
    mass: Fraction
    expected_mass: Fraction
    atom: bool

    @property
    def passed(self) -> bool:
        return self.in_top and not self.in_below and self.mass == self.expected_mass and self.atom


def verify_sharpness(p: SharpnessParams) -> SharpnessReport:
    K = sharpness_simplex(p)
    n = p.n
    ones = (1,) * n
    # Columns e_1..e_{n-1}, (a; d): the all-ones point has a unique
    # representation on them; the basepoint absorbs the rest of the mass.
    cols = [tuple(int(i == j) for j in range(n)) for i in range(n - 1)] + [p.a + (p.d,)]
    mu = rat_solve([[c[r] for c in cols] for r in range(n)], list(ones))
    mass = sum(mu, Fraction(0))
    expected = (n - 1) - Fraction(sum(p.a) - 1, p.d)
    cone = VertexCone(K, (0,) * n)
    return SharpnessReport(
        params=p,
        in_top=member(K, ones, n - 1) is not None,
        in_below=member(K, ones, n - 2) is not None,
        mass=mass,
        expected_mass=expected,
        atom=is_atom(cone, ones),
    )
