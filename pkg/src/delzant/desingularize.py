"""Refining rational fans to unimodular ones by stellar subdivisions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cancel import check
from .errors import DimensionMismatch, InternalInconsistency, UnsupportedCone
from .exactmath.dd import cone_hrep
from .exactmath.lattice import halfopen_parallelepiped_points, multiplicity, parallelepiped_coefficients
from .exactmath.linalg import dot, primitive_vector, rank
from .fan import Cone, Fan, stellar_subdivision


@dataclass(frozen=True)
class RefinementTrace:
    initial: Fan
    final: Fan
    steps: tuple = ()  # of (gamma, cone generator vectors)

    def replay(self) -> Fan:
        fan = self.initial
        for gamma, _ in self.steps:
            fan = stellar_subdivision(fan, gamma)
        return fan

    @property
    def inserted(self) -> list:
        return [g for g, _ in self.steps]

    def to_json(self):
        """Steps as {"gamma", "cone"}, the cone given by ray indices of the fan current at that step."""
        out, fan = [], self.initial
        for gamma, cone in self.steps:
            out.append({"gamma": list(gamma), "cone": sorted(fan.ray_index(v) for v in cone)})
            fan = stellar_subdivision(fan, gamma)
        return out

    def then(self, other: "RefinementTrace") -> "RefinementTrace":
        return RefinementTrace(self.initial, other.final, self.steps + other.steps)


def _faces_of(gens):
    """All faces of Cone(gens) of dimension >= 1, as frozensets of generators."""
    out = {frozenset(gens)}
    frontier = [tuple(gens)]
    while frontier:
        nxt = []
        for F in frontier:
            if rank(list(F)) <= 1:
                continue
            _, ineqs = cone_hrep(list(F))
            for a in ineqs:
                G = tuple(g for g in F if dot(a, g) == 0)
                if G and frozenset(G) not in out:
                    out.add(frozenset(G))
                    nxt.append(G)
        frontier = nxt
    return out


def simplicialize(fan: Fan, token=None):
    """Stellar subdivisions at the ray sum of every non-simplicial face, largest faces first."""
    if fan.is_simplicial:
        return fan, RefinementTrace(fan, fan)
    faces = set()
    for vecs in fan.cones_as_vectors():
        if rank(vecs) != len(vecs):
            faces |= _faces_of(vecs)
    bad = [F for F in faces if rank(list(F)) < len(F)]
    bad.sort(key=lambda F: (-rank(list(F)), sorted(F)))
    current, steps = fan, []
    for F in bad:
        check(token)
        gamma = primitive_vector([sum(v[k] for v in F) for k in range(fan.dim)])
        steps.append((gamma, tuple(sorted(F))))
        current = stellar_subdivision(current, gamma)
    if not current.is_simplicial:
        raise InternalInconsistency("simplicialization left a non-simplicial cone")
    return current, RefinementTrace(fan, current, tuple(steps))


def _choose_gamma(gens):
    """Nonzero parallelepiped point with the smallest coefficient sum, ties broken lexicographically."""
    best = None
    for p in halfopen_parallelepiped_points(gens):
        if not any(p):
            continue
        key = (sum(parallelepiped_coefficients(gens, p)), p)
        if best is None or key < best:
            best = key
    return primitive_vector(best[1])


def _multiplicities(fan: Fan):
    return [multiplicity(v) for v in fan.cones_as_vectors()]


def desingularize(fan: Fan, token=None):
    """Unimodular refinement; returns ``(fan, trace)``."""
    current, trace = simplicialize(fan, token)
    steps = list(trace.steps)
    while True:
        mults = _multiplicities(current)
        top = max(mults, default=1)
        if top <= 1:
            break
        # one phase: clear every cone of the current maximal multiplicity
        while True:
            check(token)
            mults = _multiplicities(current)
            worst = [i for i, m in enumerate(mults) if m == top]
            if not worst:
                break
            if max(mults) > top:
                raise InternalInconsistency("multiplicity increased during desingularization")
            gens = current.cone_vectors(worst[0])
            gamma = _choose_gamma(gens)
            steps.append((gamma, tuple(gens)))
            current = stellar_subdivision(current, gamma)
    return current, RefinementTrace(fan, current, tuple(steps))


def hilbert_basis_2d(C) -> list:
    """Minimal additive generators of the lattice points of a pointed 2-dimensional cone,
    ordered from the first generator to the second."""
    gens = list(C.generators) if isinstance(C, Cone) else [tuple(g) for g in C]
    if len(gens) != 2 or any(len(g) != 2 for g in gens):
        raise DimensionMismatch("hilbert_basis_2d expects two generators in the plane")
    gens = [primitive_vector(g) for g in gens]
    if rank(gens) != 2:
        raise UnsupportedCone("cone is not pointed and two-dimensional")
    candidates = set(p for p in halfopen_parallelepiped_points(gens) if any(p)) | set(gens)
    hrep = cone_hrep(gens)
    _, ineqs = hrep

    def in_cone(x):
        return all(dot(a, x) >= 0 for a in ineqs)

    basis = []
    for x in candidates:
        if not any(y != x and in_cone((x[0] - y[0], x[1] - y[1])) for y in candidates):
            basis.append(x)

    def position(x):
        lam = parallelepiped_coefficients(gens, x)
        return lam[1] / (lam[0] + lam[1])

    return sorted(basis, key=position)
