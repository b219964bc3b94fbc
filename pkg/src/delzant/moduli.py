"""Delzant polytopes: verification, corner chopping, planar classification, Minkowski paths,
and the numerical checks and invariants built on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Optional

from .cancel import check
from .desingularize import RefinementTrace, desingularize
from .errors import (
    ChopTooLarge,
    DimensionMismatch,
    InvalidParameter,
    InternalInconsistency,
    NotAVertex,
    Unsupported,
    UnsupportedInput,
)
from .exactmath.linalg import as_fraction, as_rational_vector, dot, inverse, solve_linear_system
from .fan import Fan, common_refinement, realize_polytopal, refines, stellar_subdivision
from .polytope import (
    AffineUnimodularMap,
    Polytope,
    Segment,
    build_from_halfspaces,
    delzant_failure,
    intersect,
    minkowski_combine,
    normal_fan,
    rational_length,
)


@dataclass(frozen=True)
class DelzantReport:
    delzant: bool
    reason: Optional[str] = None  # "rational", "simple" or "smooth"
    vertex: Optional[tuple] = None

    def __bool__(self):
        return self.delzant

    def to_json(self):
        from .jsonio import encode_vector
        out = {"delzant": self.delzant}
        if not self.delzant:
            out["reason"] = self.reason
            out["vertex"] = encode_vector(self.vertex)
        return out


def is_delzant(P: Polytope) -> DelzantReport:
    """Simple, with primitive edge directions forming a lattice basis at every vertex.
    Rationality holds by construction (facet normals are integer vectors)."""
    fail = delzant_failure(P)
    if fail is None:
        return DelzantReport(True)
    return DelzantReport(False, fail[0], fail[1])


def _vertex_index(P: Polytope, v):
    v = as_rational_vector(v)
    try:
        return P.vertices.index(v)
    except ValueError:
        raise NotAVertex(f"{v} is not a vertex") from None


def edge_lengths_at(P: Polytope, i) -> list:
    out = []
    for u, w in P.edges:
        if i in (u, w):
            out.append(rational_length(Segment(P.vertices[u], P.vertices[w])))
    return out


def corner_chop(P: Polytope, v, eps) -> Polytope:
    """Cut vertex v by <sum of incident normals, x> <= sum of their rhs - eps."""
    eps = as_fraction(eps)
    i = _vertex_index(P, v)
    if not is_delzant(P):
        raise UnsupportedInput("corner chopping requires a Delzant polytope")
    if eps <= 0:
        raise InvalidParameter("chop size must be positive")
    if eps >= min(edge_lengths_at(P, i)):
        raise ChopTooLarge("chop size must be smaller than every edge length at the vertex")
    inc = sorted(P.incidence[i])
    normal = tuple(sum(P.facets[j][0][k] for j in inc) for k in range(P.dim))
    rhs = sum(P.facets[j][1] for j in inc) - eps
    return build_from_halfspaces(list(P.facets) + [(normal, rhs)])


def vertex_cone(P: Polytope, v) -> list:
    """Generators of the normal cone at vertex v."""
    i = _vertex_index(P, v)
    return [P.facets[j][0] for j in sorted(P.incidence[i])]


# planar classification -----------------------------------------------------


def _cyclic_normals(P: Polytope):
    """Facet indices in counterclockwise order of their normals."""
    import math
    return sorted(range(len(P.facets)),
                  key=lambda j: math.atan2(P.facets[j][0][1], P.facets[j][0][0]))


def _neighbors(P: Polytope, j):
    order = _cyclic_normals(P)
    k = order.index(j)
    return order[k - 1], order[(k + 1) % len(order)]


@dataclass(frozen=True)
class PolygonClassification:
    base_type: str  # "triangle" or "hirzebruch"
    params: dict = field(hash=False)
    chops: tuple  # (vertex in base coordinates, eps), in replay order
    map: AffineUnimodularMap  # input -> base coordinates

    def base_polytope(self) -> Polytope:
        from .constructions import delzant_triangle, hirzebruch_trapezoid
        if self.base_type == "triangle":
            return delzant_triangle(self.params["lam"])
        p = self.params
        return hirzebruch_trapezoid(p["a"], p["b"], p["k"])

    def replay(self, apply_map: bool = True) -> Polytope:
        P = self.base_polytope()
        for v, eps in self.chops:
            P = corner_chop(P, v, eps)
        return self.map.inverse().apply_polytope(P) if apply_map else P

    def to_json(self):
        from .jsonio import encode_rational, encode_vector
        return {
            "base": {"type": self.base_type,
                     "params": {k: (encode_rational(v) if k != "k" else v) for k, v in self.params.items()}},
            "chops": [{"vertex": encode_vector(v), "eps": encode_rational(e)} for v, e in self.chops],
            "map": {"A": [list(r) for r in self.map.A], "c": encode_vector(self.map.c)},
        }


def _normalize_triangle(P: Polytope):
    v = P.vertices[0]
    a, b = sorted(P.incidence[0])
    na, nb = P.facets[a][0], P.facets[b][0]
    A = (tuple(-x for x in na), tuple(-x for x in nb))
    c = tuple(-sum(A[i][j] * v[j] for j in range(2)) for i in range(2))
    M = AffineUnimodularMap(A, c)
    image = M.apply_polytope(P)
    lam = dict(image.facets)[(1, 1)]
    return {"lam": lam}, M


def _normalize_trapezoid(P: Polytope):
    normals = [a for a, _ in P.facets]
    options = []
    for u in normals:
        neg = tuple(-x for x in u)
        if neg not in normals:
            continue
        rest = [w for w in normals if w not in (u, neg)]
        for w, z in permutations(rest):
            # linear map T on normals with T u = (0,-1), T w = (-1,0); facet normals transform by A^{-T}
            Bm = [[u[0], w[0]], [u[1], w[1]]]
            Binv = inverse(Bm)
            target = [[0, -1], [-1, 0]]
            T = [[sum(target[i][k] * Binv[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
            if any(x.denominator != 1 for row in T for x in row):
                continue
            tz = tuple(int(sum(T[i][j] * z[j] for j in range(2))) for i in range(2))
            if tz[0] != 1 or tz[1] < 0:
                continue
            # A = T^{-T}
            Tinv = inverse(T)
            A = tuple(tuple(int(Tinv[j][i]) for j in range(2)) for i in range(2))
            image = P.image(A)
            h = dict(image.facets)
            h1, h2, h3 = h[(0, -1)], h[(0, 1)], h[(-1, 0)]
            k = tz[1]
            c = (h3, (h1 - h2) / 2)
            M = AffineUnimodularMap(A, c)
            image = M.apply_polytope(P)
            h = dict(image.facets)
            params = {"a": h[(1, k)], "b": h[(0, 1)] * 2, "k": k}
            options.append(((k, params["a"], params["b"]), params, M))
    if not options:
        raise InternalInconsistency("Delzant quadrilateral without a parallel pair of edges")
    options.sort(key=lambda o: (o[0], o[2].A, o[2].c))
    _, params, M = options[0]
    return params, M


def classify_delzant_polygon(P: Polytope) -> PolygonClassification:
    """Blow down to a triangle or Hirzebruch trapezoid, then normalize by AGL(2,Z)."""
    if P.dim != 2:
        raise DimensionMismatch("classification is for polygons")
    if not is_delzant(P):
        raise UnsupportedInput("not Delzant")
    chops = []  # (vertex, eps) in input coordinates, removal order
    current = P
    while len(current.facets) > 4:
        eligible = []
        for j, (g, _) in enumerate(current.facets):
            a, b = _neighbors(current, j)
            if tuple(x + y for x, y in zip(current.facets[a][0], current.facets[b][0])) == g:
                eligible.append((g, j, a, b))
        if not eligible:
            raise InternalInconsistency("Delzant polygon with at least five edges has no blow-down")
        g, j, a, b = min(eligible)
        rows = [f for t, f in enumerate(current.facets) if t != j]
        smaller = build_from_halfspaces(rows)
        (na, ba), (nb, bb) = current.facets[a], current.facets[b]
        v = solve_linear_system([list(na), list(nb)], [ba, bb])
        eps = dot(g, v) - current.facets[j][1]
        chops.append((v, eps))
        current = smaller
    if len(current.facets) == 3:
        base_type = "triangle"
        params, M = _normalize_triangle(current)
    else:
        base_type = "hirzebruch"
        params, M = _normalize_trapezoid(current)
    replay = tuple((M.apply(v), eps) for v, eps in reversed(chops))
    return PolygonClassification(base_type, params, replay, M)


# Minkowski paths -----------------------------------------------------------


@dataclass(frozen=True)
class MinkowskiPath:
    breakpoints: tuple
    interior_fans: tuple
    complexities: tuple

    def point(self, segment: int, t) -> Polytope:
        t = as_fraction(t)
        A, B = self.breakpoints[segment], self.breakpoints[segment + 1]
        return minkowski_combine(1 - t, A, t, B)

    def sample(self, per_segment: int = 21):
        """Polytopes at t = j/(per_segment-1) on each segment, as (segment, t, polytope)."""
        out = []
        for s in range(len(self.breakpoints) - 1):
            for j in range(per_segment):
                t = Fraction(j, per_segment - 1) if per_segment > 1 else Fraction(0)
                out.append((s, t, self.point(s, t)))
        return out


def _realize_by_truncation(P: Polytope, trace: RefinementTrace, token=None) -> Optional[Polytope]:
    """Follow the stellar subdivisions of a trace by shallow truncations of P."""
    current = P
    fan = normal_fan(P)
    for gamma, _ in trace.steps:
        check(token)
        target = stellar_subdivision(fan, gamma)
        if target == fan:
            continue
        h = current.support_value(gamma)
        gaps = [h - dot(gamma, v) for v in current.vertices if dot(gamma, v) < h]
        delta = min(gaps) / 2
        for _ in range(64):
            cand = build_from_halfspaces(list(current.facets) + [(gamma, h - delta)])
            if normal_fan(cand) == target:
                break
            delta /= 2
        else:
            return None
        current, fan = cand, target
    if fan != trace.final:
        return None
    return current


def realize_refinement(P: Polytope, fan: Fan, token=None) -> Polytope:
    """A polytope with normal fan ``desingularize(fan)`` where ``fan`` is the normal fan of P."""
    final, trace = desingularize(fan, token)
    Q = _realize_by_truncation(P, trace, token)
    if Q is None:
        res = realize_polytopal(final, token)
        if not isinstance(res, Polytope):
            raise InternalInconsistency("refinement of a polytopal fan was reported non-polytopal")
        Q = res
    if normal_fan(Q) != final:
        raise InternalInconsistency("realized polytope has the wrong normal fan")
    return Q


def _segment_complexity(f_start: Fan, f_end: Fan) -> int:
    return len(set(f_start.rays) ^ set(f_end.rays))


def minkowski_path(P1: Polytope, P2: Polytope, eps=Fraction(1, 2), token=None) -> MinkowskiPath:
    """A path of Minkowski segments between Delzant polytopes staying among Delzant polytopes."""
    eps = as_fraction(eps)
    if not (0 < eps <= 1):
        raise InvalidParameter("eps must lie in (0, 1]")
    if P1.dim != P2.dim:
        raise DimensionMismatch("polytopes of different dimensions")
    if not is_delzant(P1) or not is_delzant(P2):
        raise UnsupportedInput("Minkowski paths are built between Delzant polytopes")
    N1, N2 = normal_fan(P1), normal_fan(P2)
    if P1 == P2:
        return MinkowskiPath((P1, P2), (N1,), (0,))
    if refines(N1, N2) or refines(N2, N1):
        mid = N1 if refines(N1, N2) else N2
        return MinkowskiPath((P1, P2), (mid,), (_segment_complexity(N1, N2),))
    S = minkowski_combine(1, P1, 1, P2)
    Q = realize_refinement(S, normal_fan(S), token)
    Qe = minkowski_combine(1 - eps, P1, eps, Q)
    NQ = normal_fan(Q)
    comps = (_segment_complexity(N1, NQ), _segment_complexity(NQ, N2))
    return MinkowskiPath((P1, Qe, P2), (NQ, NQ), comps)


@dataclass(frozen=True)
class PathComplexity:
    local: int
    global_: int

    def to_json(self):
        return {"local": self.local, "global": self.global_}


def path_complexity(path: MinkowskiPath) -> PathComplexity:
    ends = set(normal_fan(path.breakpoints[0]).rays) | set(normal_fan(path.breakpoints[-1]).rays)
    interior = set()
    for f in path.interior_fans:
        interior |= set(f.rays)
    return PathComplexity(max(path.complexities, default=0), len(interior - ends))


# checks ---------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    ok: bool
    bound: object
    actual: object
    slack: object

    def to_json(self):
        from .jsonio import encode_scalar
        return {"ok": self.ok, "bound": encode_scalar(self.bound),
                "actual": encode_scalar(self.actual), "slack": encode_scalar(self.slack)}


def check_lower_bound(P: Polytope) -> BoundReport:
    """#vertices >= (m - n)(n - 1) + 2 for a simple polytope with m facets."""
    if not P.is_simple():
        raise Unsupported("lower bound check requires a simple polytope")
    m, n = len(P.facets), P.dim
    bound = (m - n) * (n - 1) + 2
    actual = len(P.vertices)
    return BoundReport(actual >= bound, bound, actual, actual - bound)


def fibonacci(k: int) -> int:
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def phi_power_exceeds(x: Fraction, power: int) -> bool:
    """Exactly decide x <= phi**power, using phi**p = F_p phi + F_{p-1}."""
    F, F1 = fibonacci(power), fibonacci(power - 1)
    r = x - F1  # need r <= F * phi
    if r <= 0:
        return True
    s = 2 * r / F - 1  # need s <= sqrt(5)
    return s <= 0 or s * s <= 5


def check_polygon_area_bound(P: Polytope) -> BoundReport:
    """area <= phi^(2k) * l^2 with k vertices and l the rational-length perimeter."""
    if P.dim != 2:
        raise DimensionMismatch("area bound is for polygons")
    if not is_delzant(P):
        raise UnsupportedInput("area bound is stated for Delzant polygons")
    k = len(P.vertices)
    ell = P.perimeter()
    area = P.volume
    ok = phi_power_exceeds(area / (ell * ell), 2 * k)
    phi = (1 + 5 ** 0.5) / 2
    bound = phi ** (2 * k) * float(ell) ** 2
    return BoundReport(ok, bound, area, bound - float(area))


# symplectic dictionary -------------------------------------------------------


def _polygon_invariant(P: Polytope):
    """Cyclic sequence of (self-intersection number, edge length) up to rotation and reflection."""
    order = _cyclic_normals(P)
    m = len(order)
    seq = []
    for t, j in enumerate(order):
        prev, nxt = P.facets[order[t - 1]][0], P.facets[order[(t + 1) % m]][0]
        u = P.facets[j][0]
        s = tuple(a + b for a, b in zip(prev, nxt))
        i = next(r for r in range(2) if u[r])
        a = Fraction(s[i], u[i])
        verts = sorted(P.facet_vertices(j))
        ell = rational_length(Segment(P.vertices[verts[0]], P.vertices[verts[1]]))
        seq.append((int(a), ell))
    candidates = []
    for s in (seq, seq[::-1]):
        for r in range(m):
            candidates.append(tuple(s[r:] + s[:r]))
    return min(candidates)


@dataclass(frozen=True)
class ToricSummary:
    manifold_dimension: int
    fixed_points: int
    facets: int
    invariants: tuple

    def to_json(self):
        from .jsonio import encode_scalar
        return {
            "manifold_dimension": self.manifold_dimension,
            "fixed_points": self.fixed_points,
            "facets": self.facets,
            "invariants": [[encode_scalar(x) for x in item] for item in self.invariants],
        }


def toric_summary(P: Polytope) -> ToricSummary:
    if not is_delzant(P):
        raise UnsupportedInput("not Delzant")
    if P.dim == 2:
        inv = _polygon_invariant(P)
    else:
        # f-vector, volume, sorted edge lengths: invariant but not complete
        lengths = tuple(sorted(rational_length(Segment(P.vertices[u], P.vertices[w])) for u, w in P.edges))
        inv = ((len(P.vertices), len(P.edges), len(P.facets)), (P.volume,), lengths)
    return ToricSummary(2 * P.dim, len(P.vertices), len(P.facets), inv)


def dh_measure(P: Polytope, U: Polytope) -> Fraction:
    """Lebesgue volume of U intersected with P."""
    I = intersect(P, U)
    return I.volume if I is not None else Fraction(0)
