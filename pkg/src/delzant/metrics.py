"""Hausdorff and symmetric-difference distances between polytopes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, InvalidParameter
from .exactmath.linalg import dot, rank, solve_linear_system, sub
from .polytope import Polytope, intersect


@dataclass(frozen=True)
class DistanceResult:
    metric: str
    squared: Optional[Fraction]
    value: float
    witness: Optional[tuple] = None
    exact: Optional[Fraction] = None  # exact value when it is rational

    def to_json(self):
        from .jsonio import encode_rational
        out = {
            "metric": self.metric,
            "value": self.value,
            "squared_exact": encode_rational(self.squared) if self.squared is not None else None,
        }
        if self.exact is not None:
            out["exact"] = encode_rational(self.exact)
        return out


def _face_frames(P: Polytope):
    """Per proper face: (base point, list of independent direction vectors)."""
    frames = []
    full = len(P.vertices)
    for F, d in P.faces.items():
        if len(F) == full:
            continue
        idx = sorted(F)
        base = P.vertices[idx[0]]
        dirs = []
        for i in idx[1:]:
            cand = dirs + [sub(P.vertices[i], base)]
            if rank(cand) == len(cand):
                dirs = cand
            if len(dirs) == d:
                break
        frames.append((base, dirs))
    return frames


def _project(x, base, dirs):
    if not dirs:
        return base
    G = [[dot(u, v) for v in dirs] for u in dirs]
    rhs = [dot(u, sub(x, base)) for u in dirs]
    c = solve_linear_system(G, rhs)
    return tuple(b + sum(ci * u[k] for ci, u in zip(c, dirs)) for k, b in enumerate(base))


def squared_distance_to(x, Q: Polytope, frames=None):
    """Exact squared Euclidean distance from x to Q and the nearest point."""
    if Q.contains(x):
        return Fraction(0), tuple(x)
    best = None
    for base, dirs in frames if frames is not None else _face_frames(Q):
        y = _project(x, base, dirs)
        if not Q.contains(y):
            continue
        d2 = sum((a - b) ** 2 for a, b in zip(x, y))
        if best is None or d2 < best[0]:
            best = (d2, y)
    return best


def _directed(P: Polytope, Q: Polytope):
    frames = _face_frames(Q)
    best = (Fraction(0), None, None)
    for v in P.vertices:
        d2, y = squared_distance_to(v, Q, frames)
        if d2 > best[0]:
            best = (d2, v, y)
    return best


def hausdorff_distance(P: Polytope, Q: Polytope) -> DistanceResult:
    """Exact squared Hausdorff distance; the farthest points sit at vertices."""
    if P.dim != Q.dim:
        raise DimensionMismatch("polytopes of different dimensions")
    a = _directed(P, Q)
    b = _directed(Q, P)
    d2, v, y = max(a, b, key=lambda t: t[0])
    witness = (v, y) if v is not None else None
    exact = None
    if d2.numerator == math.isqrt(d2.numerator) ** 2 and d2.denominator == math.isqrt(d2.denominator) ** 2:
        exact = Fraction(math.isqrt(d2.numerator), math.isqrt(d2.denominator))
    return DistanceResult("hausdorff", d2, math.sqrt(d2), witness, exact)


def symmetric_difference_distance(P: Polytope, Q: Polytope) -> DistanceResult:
    """vol(P) + vol(Q) - 2 vol(P cap Q), exactly."""
    if P.dim != Q.dim:
        raise DimensionMismatch("polytopes of different dimensions")
    I = intersect(P, Q)
    common = I.volume if I is not None else Fraction(0)
    value = P.volume + Q.volume - 2 * common
    return DistanceResult("symdiff", None, float(value), None, value)


def sphere_directions(n: int, samples: int) -> np.ndarray:
    """Deterministic unit directions: equal angles in the plane, a Fibonacci spiral in 3D,
    a fixed-seed Gaussian sample otherwise."""
    if samples < 1:
        raise InvalidParameter("samples must be positive")
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        t = 2 * np.pi * (np.arange(samples) + 0.5) / samples
        return np.stack([np.cos(t), np.sin(t)], axis=1)
    if n == 3:
        i = np.arange(samples) + 0.5
        z = 1 - 2 * i / samples
        r = np.sqrt(np.maximum(0.0, 1 - z * z))
        phi = np.pi * (3 - np.sqrt(5)) * i
        return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    rng = np.random.default_rng(20240601)
    U = rng.standard_normal((samples, n))
    return U / np.linalg.norm(U, axis=1, keepdims=True)


def support_uniform_norm_estimate(P: Polytope, Q: Polytope, samples: int = 10000) -> float:
    """max over sampled unit directions of |h_P - h_Q|; a lower bound for the Hausdorff distance."""
    if P.dim != Q.dim:
        raise DimensionMismatch("polytopes of different dimensions")
    U = sphere_directions(P.dim, samples)
    VP = np.array([[float(x) for x in v] for v in P.vertices])
    VQ = np.array([[float(x) for x in v] for v in Q.vertices])
    hP = (U @ VP.T).max(axis=1)
    hQ = (U @ VQ.T).max(axis=1)
    return float(np.abs(hP - hQ).max())
