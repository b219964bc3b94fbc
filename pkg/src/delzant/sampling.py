"""Seeded random generators for Delzant polytopes and complete rational fans."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .constructions import cube, delzant_triangle, hirzebruch_trapezoid, prism
from .errors import DelzantError
from .exactmath.linalg import mat_mul
from .fan import Fan
from .moduli import corner_chop, edge_lengths_at
from .polytope import AffineUnimodularMap, Polytope, build_from_halfspaces, minkowski_combine, normal_fan


@dataclass(frozen=True)
class SamplerConfig:
    max_chops: int = 3
    max_k: int = 3
    max_entry: int = 3  # entries of elementary matrices in random unimodular maps
    map_steps: int = 3
    denominator: int = 4  # parameters are multiples of 1/denominator


def random_unimodular(rng: random.Random, n: int, cfg: SamplerConfig = SamplerConfig()):
    """Product of random elementary integer matrices and signed permutations."""
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(cfg.map_steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        E = [[int(r == c) for c in range(n)] for r in range(n)]
        if i != j:
            E[i][j] = rng.randint(-cfg.max_entry, cfg.max_entry)
        E[i][i] = rng.choice((1, -1))
        A = mat_mul(E, A)
    perm = list(range(n))
    rng.shuffle(perm)
    A = [A[p] for p in perm]
    return tuple(tuple(int(x) for x in row) for row in A)


def random_map(rng: random.Random, n: int, cfg: SamplerConfig = SamplerConfig()) -> AffineUnimodularMap:
    A = random_unimodular(rng, n, cfg)
    c = tuple(Fraction(rng.randint(-8, 8), cfg.denominator) for _ in range(n))
    return AffineUnimodularMap(A, c)


def _rand_pos(rng, lo, hi, den):
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_chops(rng: random.Random, P: Polytope, count: int) -> Polytope:
    for _ in range(count):
        i = rng.randrange(len(P.vertices))
        ell = min(edge_lengths_at(P, i))
        eps = ell * Fraction(rng.randint(1, 7), 8)
        P = corner_chop(P, P.vertices[i], eps)
    return P


@dataclass(frozen=True)
class RandomPolygon:
    base_type: str
    params: dict
    chops: int
    polygon: Polytope


def random_base_polygon(rng: random.Random, cfg: SamplerConfig = SamplerConfig()):
    den = cfg.denominator
    if rng.random() < 0.4:
        lam = _rand_pos(rng, 1, 4, den)
        return "triangle", {"lam": lam}, delzant_triangle(lam)
    k = rng.randint(0, cfg.max_k)
    b = _rand_pos(rng, 1, 3, den)
    a = b * k / 2 + _rand_pos(rng, 1, 3, den)
    return "hirzebruch", {"a": a, "b": b, "k": k}, hirzebruch_trapezoid(a, b, k)


def random_delzant_polygon(rng: random.Random, cfg: SamplerConfig = SamplerConfig(),
                           chops: int = None, transform: bool = True) -> RandomPolygon:
    base_type, params, P = random_base_polygon(rng, cfg)
    s = rng.randint(0, cfg.max_chops) if chops is None else chops
    P = random_chops(rng, P, s)
    if transform:
        P = random_map(rng, 2, cfg).apply_polytope(P)
    return RandomPolygon(base_type, params, s, P)


def random_polygon_pair(rng: random.Random, cfg: SamplerConfig = SamplerConfig()):
    return random_delzant_polygon(rng, cfg).polygon, random_delzant_polygon(rng, cfg).polygon


SOLID_CONFIG = SamplerConfig(max_entry=1, map_steps=1)


def random_delzant_3d(rng: random.Random, cfg: SamplerConfig = SOLID_CONFIG, max_chops: int = 2) -> Polytope:
    """A chopped box or triangular prism, moved by a mild random unimodular map
    (large shears make common refinements, and their desingularizations, very large)."""
    den = cfg.denominator
    if rng.random() < 0.5:
        sides = [_rand_pos(rng, 1, 3, den) for _ in range(3)]
        rows = []
        for i, s in enumerate(sides):
            e = tuple(int(i == j) for j in range(3))
            rows += [(e, s), (tuple(-x for x in e), 0)]
        P = build_from_halfspaces(rows)
    else:
        P = prism(delzant_triangle(_rand_pos(rng, 1, 3, den)), _rand_pos(rng, 1, 3, den))
    P = random_chops(rng, P, rng.randint(0, max_chops))
    return random_map(rng, 3, cfg).apply_polytope(P)


def random_complete_fan(rng: random.Random, n: int, cfg: SamplerConfig = SamplerConfig()) -> Fan:
    """Normal fan of a Minkowski sum of two Delzant polytopes with perturbed facet offsets.
    Usually neither simplicial-unimodular nor a refinement of the summands' fans."""
    if n == 2:
        P, Q = random_polygon_pair(rng, cfg)
    else:
        P, Q = random_delzant_3d(rng, SOLID_CONFIG, 1), random_delzant_3d(rng, SOLID_CONFIG, 1)
    S = minkowski_combine(1, P, 1, Q)
    for _ in range(20):
        rows = [(a, b + Fraction(rng.randint(-2, 2), 16)) for a, b in S.facets]
        try:
            return normal_fan(build_from_halfspaces(rows))
        except DelzantError:
            continue
    return normal_fan(S)
