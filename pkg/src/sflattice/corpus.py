"""Seeded random corpora of lattice polytopes."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .polytope import LatticePolytope, is_empty_polytope


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    dims: tuple[int, int] = (1, 4)
    points: tuple[int, int] = (1, 8)
    coords: tuple[int, int] = (-3, 3)
    m_max: int = 6
    count: int = 200
    hole_bound: int | None = None

    def __post_init__(self):
        for name in ("dims", "points", "coords"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} range {lo}..{hi} is empty")
        if self.dims[0] < 1 or self.points[0] < 1:
            raise ValueError("dimension and point counts start at 1")
        if self.m_max < 1:
            raise ValueError("m_max must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


def random_polytopes(cfg: RunConfig):
    """Yield ``cfg.count`` polytopes, each the hull of at most
    ``cfg.points[1]`` uniform random points (so at most that many vertices)."""
    rng = random.Random(cfg.seed)
    for i in range(cfg.count):
        n = rng.randint(*cfg.dims)
        k = rng.randint(*cfg.points)
        pts = [tuple(rng.randint(*cfg.coords) for _ in range(n)) for _ in range(k)]
        yield LatticePolytope(pts, name=f"seed{cfg.seed}-{i}")


def random_empty_simplices(seed: int, count: int, dims: tuple[int, int] = (2, 4), spread: int = 2):
    """Full-dimensional empty lattice simplices by rejection sampling
    vertices from ``[0, spread]^n``."""
    rng = random.Random(seed)
    found = 0
    while found < count:
        n = rng.randint(*dims)
        pts = {tuple(rng.randint(0, spread) for _ in range(n)) for _ in range(n + 1)}
        if len(pts) != n + 1:
            continue
        K = LatticePolytope(pts)
        if K.affine_dim != n or not K.is_simplex() or not is_empty_polytope(K):
            continue
        found += 1
        yield K
