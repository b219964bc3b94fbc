"""Rational polyhedral fans stored as a ray table plus maximal cones.

Rays are primitive integer vectors sorted lexicographically and maximal cones
are sorted tuples of ray indices, so structural equality of two fans is plain
dataclass equality after ``Fan.make``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Optional

from .cancel import check
from .errors import (
    DimensionMismatch,
    InternalInconsistency,
    InvalidFan,
    NotSpanning,
    OutsideSupport,
    Unsupported,
    UnsupportedCone,
)
from .exactmath.dd import cone_hrep, extreme_rays, in_cone_hrep
from .exactmath.lattice import multiplicity
from .exactmath.linalg import (
    as_int_vector,
    dot,
    integerize,
    inverse,
    lattice_determinant,
    mat_vec,
    nullspace,
    primitive_vector,
    rank,
)
from .exactmath.lp import LPProblem, solve_rational_lp


@dataclass(frozen=True)
class Cone:
    """A cone given by its primitive generators (sorted)."""

    generators: tuple

    @classmethod
    def make(cls, generators):
        return cls(tuple(sorted({primitive_vector(g) for g in generators})))

    @property
    def dim(self) -> int:
        return rank(self.generators)

    @property
    def is_simplicial(self) -> bool:
        return self.dim == len(self.generators)

    @property
    def multiplicity(self) -> int:
        return multiplicity(self.generators)

    def contains(self, x) -> bool:
        return in_cone_hrep(cone_hrep(self.generators), x)


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple
    maximal_cones: tuple

    @classmethod
    def make(cls, dim, rays, cones):
        """Canonicalize: primitivize and sort rays, drop unused rays, sort cones."""
        prim = [primitive_vector(r) for r in rays]
        if any(len(r) != dim for r in prim):
            raise DimensionMismatch("ray of wrong dimension")
        cone_vecs = []
        for c in cones:
            vecs = {prim[i] for i in c}
            if len(vecs) != len(set(c)):
                raise InvalidFan("cone uses parallel rays twice")
            cone_vecs.append(vecs)
        used = sorted(set().union(*cone_vecs)) if cone_vecs else []
        index = {r: i for i, r in enumerate(used)}
        maximal = sorted({tuple(sorted(index[v] for v in vecs)) for vecs in cone_vecs})
        # drop cones that are faces of other listed cones
        sets = [frozenset(c) for c in maximal]
        keep = [c for c, s in zip(maximal, sets) if not any(s < t for t in sets)]
        return cls(dim, tuple(used), tuple(keep))

    @classmethod
    def from_cones(cls, dim, cones):
        """Build from cones given as lists of generator vectors."""
        rays, idx, out = [], {}, []
        for c in cones:
            ids = []
            for g in c:
                g = primitive_vector(g)
                if g not in idx:
                    idx[g] = len(rays)
                    rays.append(g)
                ids.append(idx[g])
            out.append(ids)
        return cls.make(dim, rays, out)

    def cone_vectors(self, i) -> list:
        return [self.rays[j] for j in self.maximal_cones[i]]

    def cones_as_vectors(self) -> list:
        return [self.cone_vectors(i) for i in range(len(self.maximal_cones))]

    def ray_index(self, v) -> Optional[int]:
        v = primitive_vector(v)
        try:
            return self.rays.index(v)
        except ValueError:
            return None

    @cached_property
    def hreps(self) -> tuple:
        return tuple(cone_hrep(self.cone_vectors(i)) for i in range(len(self.maximal_cones)))

    @cached_property
    def is_simplicial(self) -> bool:
        return all(rank(self.cone_vectors(i)) == len(c) for i, c in enumerate(self.maximal_cones))

    @cached_property
    def is_full_simplicial(self) -> bool:
        return all(len(c) == self.dim for c in self.maximal_cones) and self.is_simplicial

    def containing_cones(self, x) -> list:
        """Indices of maximal cones containing x."""
        return [i for i, h in enumerate(self.hreps) if in_cone_hrep(h, x)]

    def star(self, r) -> list:
        return [i for i, c in enumerate(self.maximal_cones) if r in c]

    def is_face(self, idx) -> bool:
        """Whether the ray-index set is a face of some maximal cone."""
        idx = frozenset(idx)
        for i, c in enumerate(self.maximal_cones):
            if idx <= set(c):
                if self.is_simplicial:
                    return True
                eqs, ineqs = self.hreps[i]
                tight = set(c)
                for a in ineqs:
                    if all(dot(a, self.rays[j]) == 0 for j in idx):
                        tight &= {j for j in c if dot(a, self.rays[j]) == 0}
                if tight == idx:
                    return True
        return False

    def __repr__(self):
        return f"Fan(dim={self.dim}, rays={len(self.rays)}, cones={len(self.maximal_cones)})"


@dataclass(frozen=True)
class FanReport:
    rational: bool
    pointed: bool
    simplicial: bool
    complete: bool
    unimodular: bool
    multiplicities: tuple
    valency: tuple

    def to_json(self):
        return {
            "rational": self.rational,
            "pointed": self.pointed,
            "simplicial": self.simplicial,
            "complete": self.complete,
            "unimodular": self.unimodular,
            "multiplicities": list(self.multiplicities),
            "valency": list(self.valency),
        }


_PROBES = [
    (1000003, 7919, 104729, 31337, 65537),
    (-524287, 2147, 999983, -17389, 433),
    (12289, -786433, -3571, 196613, 8191),
]


def _ridge_normal(vectors, dim):
    ns = nullspace(vectors, dim)
    return integerize(ns[0]) if len(ns) == 1 else None


def _properly_intersect(vi, vj, shared):
    """LP separation test: some y with y.g = 0 on shared rays, > 0 on the rest of vi,
    < 0 on the rest of vj."""
    A, b, strict = [], [], []
    for g in vi:
        if g in shared:
            A.append(list(g)); b.append(0); strict.append(False)
            A.append([-x for x in g]); b.append(0); strict.append(False)
        else:
            A.append([-x for x in g]); b.append(0); strict.append(True)
    for g in vj:
        if g not in shared:
            A.append(list(g)); b.append(0); strict.append(True)
    return solve_rational_lp(LPProblem.make(A, b, strict)).feasible


def _check_pointed(vectors) -> bool:
    A = [[-x for x in g] for g in vectors]
    return solve_rational_lp(LPProblem.make(A, [0] * len(A), [True] * len(A))).feasible


def _simplicial_ridge_scan(fan: Fan):
    """For full-dimensional simplicial fans: returns (closed, witness_pair_or_None)."""
    ridges = {}
    for i, c in enumerate(fan.maximal_cones):
        for j in c:
            ridges.setdefault(tuple(x for x in c if x != j), []).append((i, j))
    closed = True
    for ridge, owners in ridges.items():
        if len(owners) == 1:
            closed = False
            continue
        if len(owners) > 2:
            return closed, (owners[0][0], owners[1][0])
        h = _ridge_normal([fan.rays[r] for r in ridge], fan.dim) if ridge else (1,)
        s1 = dot(h, fan.rays[owners[0][1]])
        s2 = dot(h, fan.rays[owners[1][1]])
        if s1 * s2 >= 0:
            return closed, (owners[0][0], owners[1][0])
    return closed, None


def _probe_count(fan: Fan, probe):
    count, hits = 0, []
    for i in range(len(fan.maximal_cones)):
        inv = _cone_inverse(fan, i)
        lam = mat_vec(inv, probe)
        if any(x == 0 for x in lam):
            return None, None
        if all(x > 0 for x in lam):
            count += 1
            hits.append(i)
    return count, hits


_INV_CACHE_ATTR = "_inverse_cache"


def _cone_inverse(fan: Fan, i):
    cache = fan.__dict__.setdefault(_INV_CACHE_ATTR, {})
    if i not in cache:
        vecs = fan.cone_vectors(i)
        cache[i] = inverse([[v[r] for v in vecs] for r in range(fan.dim)])
    return cache[i]


def _check_general(fan: Fan, token=None):
    """Pairwise proper-intersection test and facet-matching completeness test."""
    vecs = fan.cones_as_vectors()
    for i, j in combinations(range(len(vecs)), 2):
        check(token)
        shared = set(vecs[i]) & set(vecs[j])
        if not _properly_intersect(vecs[i], vecs[j], shared):
            raise InvalidFan("maximal cones intersect improperly",
                             witness=(tuple(vecs[i]), tuple(vecs[j])))
    if any(rank(v) < fan.dim for v in vecs):
        return False
    facet_count = {}
    for i, v in enumerate(vecs):
        _, ineqs = fan.hreps[i]
        for a in ineqs:
            key = frozenset(g for g in v if dot(a, g) == 0)
            facet_count[key] = facet_count.get(key, 0) + 1
    return all(c == 2 for c in facet_count.values())


def fan_properties(fan: Fan, token=None) -> FanReport:
    """Exact structural report; raises InvalidFan on improper intersections."""
    n = fan.dim
    vecs = fan.cones_as_vectors()
    simplicial = fan.is_simplicial
    pointed = simplicial or all(_check_pointed(v) for v in vecs)
    complete = None
    if fan.is_full_simplicial and n >= 1 and vecs:
        closed, bad = _simplicial_ridge_scan(fan)
        if bad is not None:
            i, j = bad
            raise InvalidFan("maximal cones overlap across a shared ridge",
                             witness=(tuple(vecs[i]), tuple(vecs[j])))
        if closed:
            probes = [p[:n] for p in _PROBES]
            counts = []
            for p in probes:
                c, hits = _probe_count(fan, p)
                if c is not None:
                    counts.append((c, hits))
            if counts and all(c == 1 for c, _ in counts):
                complete = True
            elif counts and any(c > 1 for c, _ in counts):
                hits = next(h for c, h in counts if c > 1)
                raise InvalidFan("a generic direction lies in several maximal cones",
                                 witness=(tuple(vecs[hits[0]]), tuple(vecs[hits[1]])))
    if complete is None:
        complete = _check_general(fan, token) if vecs else False
    mults = []
    for v in vecs:
        mults.append(multiplicity(v) if rank(v) == len(v) else None)
    unimodular = simplicial and all(m == 1 for m in mults)
    valency = tuple(
        sum(1 for i, c in enumerate(fan.maximal_cones) if r in c and len(c) == n and rank(vecs[i]) == n)
        for r in range(len(fan.rays))
    )
    return FanReport(True, pointed, simplicial, bool(complete), unimodular, tuple(mults), valency)


def refines(fine: Fan, coarse: Fan) -> bool:
    """Every maximal cone of ``fine`` lies in some maximal cone of ``coarse``."""
    if fine.dim != coarse.dim:
        raise DimensionMismatch("fans of different dimensions")
    hreps = coarse.hreps
    for c in fine.maximal_cones:
        gens = [fine.rays[j] for j in c]
        if not any(all(in_cone_hrep(h, g) for g in gens) for h in hreps):
            return False
    return True


def cone_intersection_rays(h1, h2, dim):
    """Extreme rays of the intersection of two pointed cones given by H-representations."""
    A = []
    for hrep in (h1, h2):
        eqs, ineqs = hrep
        A += [[-x for x in a] for a in ineqs]
        A += [list(e) for e in eqs] + [[-x for x in e] for e in eqs]
    return extreme_rays(A, dim=dim)


def common_refinement(f1: Fan, f2: Fan, token=None) -> Fan:
    """Full-dimensional pairwise intersections of maximal cones."""
    if f1.dim != f2.dim:
        raise DimensionMismatch("fans of different dimensions")
    n = f1.dim
    cones = []
    for i, h1 in enumerate(f1.hreps):
        for j, h2 in enumerate(f2.hreps):
            check(token)
            rays = cone_intersection_rays(h1, h2, n)
            if len(rays) >= n and rank(rays) == n:
                cones.append(rays)
    return Fan.from_cones(n, cones)


def _cone_facet_sets(gens):
    """Generator subsets spanning the facets of Cone(gens), relative to its span."""
    _, ineqs = cone_hrep(gens)
    return [(a, [g for g in gens if dot(a, g) == 0]) for a in ineqs]


def stellar_subdivision(fan: Fan, gamma) -> Fan:
    """Stellar subdivision at the ray through ``gamma``."""
    gamma = primitive_vector(gamma)
    if len(gamma) != fan.dim:
        raise DimensionMismatch("vector and fan dimensions differ")
    if gamma in fan.rays:
        return fan
    hits = fan.containing_cones(gamma)
    if not hits:
        raise OutsideSupport(f"{gamma} is not in the support of the fan")
    new_cones = []
    for i, c in enumerate(fan.maximal_cones):
        gens = fan.cone_vectors(i)
        if i not in hits:
            new_cones.append(gens)
            continue
        # join gamma with every facet of the cone that does not contain it
        for a, face in _cone_facet_sets(gens):
            if dot(a, gamma) != 0:
                new_cones.append(face + [gamma])
    return Fan.from_cones(fan.dim, new_cones)


def _resolve_cone(fan: Fan, C):
    """Ray indices of a cone given as a Cone, vectors, or indices."""
    if isinstance(C, Cone):
        vecs = C.generators
    else:
        C = list(C)
        if C and isinstance(C[0], int):
            return tuple(sorted(C))
        vecs = [primitive_vector(v) for v in C]
    idx = []
    for v in vecs:
        j = fan.ray_index(v)
        if j is None:
            raise UnsupportedCone(f"{v} is not a ray of the fan")
        idx.append(j)
    return tuple(sorted(idx))


def blow_up(fan: Fan, C) -> Fan:
    """Stellar subdivision at the sum of the generators of a unimodular cone of the fan."""
    idx = _resolve_cone(fan, C)
    if not idx:
        raise UnsupportedCone("empty cone")
    if not fan.is_face(idx):
        raise UnsupportedCone("cone is not a face of the fan")
    vecs = [fan.rays[j] for j in idx]
    if rank(vecs) != len(vecs) or multiplicity(vecs) != 1:
        raise UnsupportedCone("blow-up requires a unimodular cone")
    gamma = tuple(sum(v[k] for v in vecs) for k in range(fan.dim))
    return stellar_subdivision(fan, gamma)


@dataclass(frozen=True)
class BlowDown:
    ray: tuple
    cone: tuple  # generator vectors of the blown-up cone in the smaller fan
    result: Fan = field(compare=False, repr=False)

    def to_json(self):
        return {"ray": list(self.ray), "cone": [list(v) for v in self.cone]}


def find_blow_downs(fan: Fan, token=None) -> list:
    """All rays whose removal is a blow-down to a unimodular fan, verified by reconstruction."""
    n = fan.dim
    complete = fan_properties(fan).complete
    out = []
    for r, gamma in enumerate(fan.rays):
        check(token)
        star = fan.star(r)
        link = sorted(set().union(*(fan.maximal_cones[i] for i in star)) - {r})
        for size in range(2, n + 1):
            for S in combinations(link, size):
                total = tuple(sum(fan.rays[j][k] for j in S) for k in range(n))
                if total != gamma:
                    continue
                S_set = set(S)
                # every star cone must contain all but one element of S
                if any(len(S_set & set(fan.maximal_cones[i])) != size - 1 for i in star):
                    continue
                merged = []
                for i, c in enumerate(fan.maximal_cones):
                    if i in star:
                        merged.append([fan.rays[j] for j in (set(c) - {r}) | S_set])
                    else:
                        merged.append(fan.cone_vectors(i))
                try:
                    small = Fan.from_cones(n, merged)
                    if any(rank(small.cone_vectors(i)) != len(c) for i, c in enumerate(small.maximal_cones)):
                        continue
                    if any(multiplicity(small.cone_vectors(i)) != 1 for i in range(len(small.maximal_cones))):
                        continue
                    if blow_up(small, [fan.rays[j] for j in S]) != fan:
                        continue
                    rep = fan_properties(small)
                except (InvalidFan, UnsupportedCone):
                    continue
                if rep.unimodular and (rep.complete or not complete):
                    out.append(BlowDown(gamma, tuple(fan.rays[j] for j in S), small))
    return out


def apply_blow_down(fan: Fan, candidate: BlowDown) -> Fan:
    return candidate.result


# secondary cones -------------------------------------------------------


@dataclass(frozen=True)
class SecondaryCone:
    """Rows over right-hand-side vectors b: ``coeffs . b = 0`` or ``coeffs . b >= 0`` (``> 0`` if strict)."""

    m: int
    equalities: tuple
    inequalities: tuple  # of (coeffs, strict)

    def contains(self, b, closure=False) -> bool:
        b = [Fraction(x) for x in b]
        if any(dot(e, b) != 0 for e in self.equalities):
            return False
        for c, strict in self.inequalities:
            v = dot(c, b)
            if v < 0 or (strict and not closure and v == 0):
                return False
        return True

    def _closed_rows(self):
        A = [[-x for x in c] for c, _ in self.inequalities]
        A += [list(e) for e in self.equalities] + [[-x for x in e] for e in self.equalities]
        return A

    def _implies_row(self, rows, c) -> bool:
        """Closed rows imply c.b >= 0 iff {rows, c.b < 0} is infeasible."""
        A = rows + [list(c)]
        b = [0] * len(A)
        strict = [False] * len(rows) + [True]
        return not solve_rational_lp(LPProblem.make(A, b, strict)).feasible

    def implies(self, other: "SecondaryCone") -> bool:
        """Whether the closure of self is contained in the closure of other."""
        rows = self._closed_rows()
        if not rows:
            rows = [[0] * self.m]
        for c, _ in other.inequalities:
            if not self._implies_row(rows, c):
                return False
        for e in other.equalities:
            if not (self._implies_row(rows, e) and self._implies_row(rows, [-x for x in e])):
                return False
        return True

    def irredundant(self) -> "SecondaryCone":
        rows = sorted(set(self.inequalities))
        keep = list(rows)
        for row in rows:
            others = [r for r in keep if r != row]
            A = [[-x for x in c] for c, _ in others]
            A += [list(e) for e in self.equalities] + [[-x for x in e] for e in self.equalities]
            if not A:
                continue
            if self._implies_row(A, row[0]):
                keep = others
        return SecondaryCone(self.m, self.equalities, tuple(keep))

    def lineality_dim(self) -> int:
        rows = [list(c) for c, _ in self.inequalities] + [list(e) for e in self.equalities]
        return self.m - (rank(rows) if rows else 0)

    def to_json(self):
        from .jsonio import encode_rational
        return {
            "equalities": [[encode_rational(x) for x in e] for e in self.equalities],
            "inequalities": [{"coeffs": [encode_rational(x) for x in c], "strict": s}
                             for c, s in self.inequalities],
        }


def _positively_spans(V, n) -> bool:
    if rank(V) < n:
        return False
    # some dependence with all coefficients >= 1
    m = len(V)
    A, b = [], []
    for k in range(n):
        A.append([v[k] for v in V]); b.append(0)
        A.append([-v[k] for v in V]); b.append(0)
    for i in range(m):
        row = [0] * m
        row[i] = -1
        A.append(row); b.append(-1)
    return solve_rational_lp(LPProblem.make(A, b)).feasible


def config_cone(V, token=None, require_spanning: bool = True) -> SecondaryCone:
    """Inequalities from minimal-support dependences of a positively spanning configuration.

    With ``require_spanning=False`` the same circuit rows are produced for any configuration;
    they are then only the sublinearity conditions, not a description of realizable supports.
    """
    V = [as_int_vector(v) for v in V]
    if not V:
        raise NotSpanning("empty configuration")
    n = len(V[0])
    m = len(V)
    if require_spanning and not _positively_spans(V, n):
        raise NotSpanning("configuration does not positively span the space")
    rows = set()
    for size in range(2, n + 2):
        for S in combinations(range(m), size):
            check(token)
            vecs = [V[i] for i in S]
            ns = nullspace([[v[k] for v in vecs] for k in range(n)], size)
            if len(ns) != 1 or any(x == 0 for x in ns[0]):
                continue
            lam = integerize(ns[0])
            neg = sum(1 for x in lam if x < 0)
            if neg > 1 and size - neg > 1:
                continue
            if neg > 1 or (neg == 1 and size == 2):
                lam = tuple(-x for x in lam)
            coeffs = [0] * m
            for i, x in zip(S, lam):
                coeffs[i] = x
            rows.add((tuple(coeffs), False))
    return SecondaryCone(m, (), tuple(sorted(rows)))


def wall_relations(fan: Fan) -> list:
    """One primitive linear relation per pair of adjacent maximal cones, positive on the two
    rays off the shared ridge."""
    if not fan.is_full_simplicial:
        raise Unsupported("secondary cone requires a full-dimensional simplicial fan")
    n, m = fan.dim, len(fan.rays)
    ridges = {}
    for c in fan.maximal_cones:
        for j in c:
            ridges.setdefault(tuple(x for x in c if x != j), []).append(j)
    rows = set()
    for ridge, opp in ridges.items():
        if len(opp) != 2:
            continue
        idx = list(ridge) + opp
        vecs = [fan.rays[i] for i in idx]
        ns = nullspace([[v[k] for v in vecs] for k in range(n)], len(idx))
        if len(ns) != 1:
            raise InvalidFan("ridge and opposite rays are not in general position")
        lam = integerize(ns[0])
        if lam[-1] < 0:
            lam = tuple(-x for x in lam)
        if lam[-1] <= 0 or lam[-2] <= 0:
            raise InvalidFan("adjacent cones lie on the same side of their ridge")
        coeffs = [0] * m
        for i, x in zip(idx, lam):
            coeffs[i] += x
        rows.add(tuple(coeffs))
    return sorted(rows)


def secondary_cone(fan: Fan) -> SecondaryCone:
    """Strict wall inequalities whose solutions are support vectors of polytopes with this normal fan."""
    rows = wall_relations(fan)
    return SecondaryCone(len(fan.rays), (), tuple((r, True) for r in rows))


@dataclass(frozen=True)
class NotPolytopal:
    """Certificate lam >= 0, not all zero, with sum lam_i * wall_i = 0."""

    certificate: tuple
    walls: tuple

    polytopal: bool = field(default=False, init=False)

    def verify(self) -> bool:
        lam = self.certificate
        if any(x < 0 for x in lam) or not any(lam):
            return False
        m = len(self.walls[0]) if self.walls else 0
        return all(sum(l * w[k] for l, w in zip(lam, self.walls)) == 0 for k in range(m))


def realize_polytopal(fan: Fan, token=None):
    """A polytope with normal fan equal to ``fan``, or NotPolytopal with a certificate."""
    from .polytope import build_from_halfspaces, normal_fan

    walls = wall_relations(fan)
    m = len(fan.rays)
    A = [[-x for x in w] for w in walls]
    check(token)
    outcome = solve_rational_lp(LPProblem.make(A, [0] * len(A), [True] * len(A)))
    if not outcome.feasible:
        cert = NotPolytopal(tuple(outcome.certificate), tuple(walls))
        if not cert.verify():
            raise InternalInconsistency("non-polytopality certificate failed verification")
        return cert
    b = outcome.witness if walls else tuple(Fraction(1) for _ in range(m))
    P = build_from_halfspaces(list(zip(fan.rays, b)))
    if normal_fan(P) != fan:
        raise InternalInconsistency("realized polytope has a different normal fan")
    return P


@dataclass(frozen=True)
class StratumInfo:
    dimension: int
    lineality: int

    def to_json(self):
        return {"dimension": self.dimension, "lineality": self.lineality}


def stratum_info(fan: Fan) -> StratumInfo:
    res = realize_polytopal(fan)
    if isinstance(res, NotPolytopal):
        raise Unsupported("fan is not polytopal")
    sc = secondary_cone(fan)
    return StratumInfo(len(fan.rays), sc.lineality_dim())
