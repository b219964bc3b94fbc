"""Exact full-dimensional convex polytopes with both facet and vertex descriptions.

Facets use outer normals: a polytope is ``{x : <a_i, x> <= b_i}`` with each
``a_i`` a primitive integer vector. Facets are kept sorted by normal and
vertices sorted lexicographically, so two equal polytopes are equal as
dataclasses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from itertools import permutations
from math import factorial, gcd, lcm

from .errors import (
    DimensionMismatch,
    InvalidParameter,
    EmptyPolytope,
    NotFullDimensional,
    Unbounded,
    UnsupportedInput,
)
from .exactmath.dd import extreme_rays
from .exactmath.linalg import (
    as_fraction,
    as_rational_vector,
    determinant,
    dot,
    integerize,
    primitive_vector,
    inverse,
    rank,
    sub,
)
from .exactmath.lp import LPProblem, solve_rational_lp


def _normalize_row(normal, rhs):
    normal = as_rational_vector(normal)
    rhs = as_fraction(rhs)
    if not any(normal):
        return None, rhs
    prim = integerize(normal)
    i = next(k for k, x in enumerate(prim) if x)
    scale = normal[i] / prim[i]
    return prim, rhs / scale


def _affine_rank(points):
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return rank([sub(p, p0) for p in points[1:]])


@dataclass(frozen=True)
class Polytope:
    dim: int
    facets: tuple
    vertices: tuple
    incidence: tuple = field(compare=False, repr=False)

    # construction -------------------------------------------------------

    @classmethod
    def _assemble(cls, dim, facets, vertices):
        facets = tuple(sorted((tuple(a), Fraction(b)) for a, b in facets))
        vertices = tuple(sorted(tuple(Fraction(x) for x in v) for v in vertices))
        D = reduce(lcm, (x.denominator for v in vertices for x in v), 1)
        scaled = [tuple(x.numerator * (D // x.denominator) for x in v) for v in vertices]
        rhs = [b * D for _, b in facets]
        incidence = tuple(
            frozenset(j for j, (a, _) in enumerate(facets) if sum(p * q for p, q in zip(a, w)) == rhs[j])
            for w in scaled
        )
        return cls(dim, facets, vertices, incidence)

    @property
    def normals(self):
        return [a for a, _ in self.facets]

    @property
    def rhs(self):
        return [b for _, b in self.facets]

    def contains(self, x) -> bool:
        return all(dot(a, x) <= b for a, b in self.facets)

    def support_value(self, alpha) -> Fraction:
        alpha = as_rational_vector(alpha)
        if len(alpha) != self.dim:
            raise DimensionMismatch("direction and polytope dimensions differ")
        if all(x.denominator == 1 for x in alpha):
            return self._int_support([int(x) for x in alpha])[0]
        return max(dot(alpha, v) for v in self.vertices)

    @cached_property
    def _scaled_vertices(self):
        """(D, integer rows) with vertices = rows / D."""
        D = reduce(lcm, (x.denominator for v in self.vertices for x in v), 1)
        return D, [tuple(x.numerator * (D // x.denominator) for x in v) for v in self.vertices]

    def _int_support(self, u):
        """Support value in an integer direction and the indices of the maximizing vertices."""
        D, rows = self._scaled_vertices
        vals = [sum(a * x for a, x in zip(u, r)) for r in rows]
        h = max(vals)
        return Fraction(h, D), [i for i, x in enumerate(vals) if x == h]

    def facet_vertices(self, j) -> frozenset:
        return frozenset(i for i, inc in enumerate(self.incidence) if j in inc)

    # combinatorics ------------------------------------------------------

    @cached_property
    def faces(self) -> dict:
        """Map from nonempty face (as a frozenset of vertex indices) to its dimension."""
        full = frozenset(range(len(self.vertices)))
        facet_sets = [self.facet_vertices(j) for j in range(len(self.facets))]
        found = {full}
        frontier = [full]
        while frontier:
            nxt = []
            for F in frontier:
                for S in facet_sets:
                    G = F & S
                    if G and G not in found:
                        found.add(G)
                        nxt.append(G)
            frontier = nxt
        return {F: _affine_rank([self.vertices[i] for i in sorted(F)]) for F in found}

    def face_facets(self, F) -> frozenset:
        """Indices of facets containing every vertex of face F."""
        return frozenset.intersection(*(self.incidence[i] for i in F))

    @cached_property
    def edges(self) -> tuple:
        """Vertex-index pairs joined by an edge."""
        return tuple(sorted(tuple(sorted(F)) for F, d in self.faces.items() if d == 1))

    def edge_directions(self, i) -> list:
        """Primitive edge directions at vertex ``i``."""
        _, rows = self._scaled_vertices
        out = []
        for u, w in self.edges:
            if u == i:
                out.append(primitive_vector(sub(rows[w], rows[u])))
            elif w == i:
                out.append(primitive_vector(sub(rows[u], rows[w])))
        return out

    def is_simple(self) -> bool:
        return all(len(inc) == self.dim for inc in self.incidence)

    # measures -----------------------------------------------------------

    def simplices(self) -> list:
        """A triangulation (pulling from the lowest vertex of every face)."""
        faces = self.faces
        by_dim = {}
        for F, d in faces.items():
            by_dim.setdefault(d, []).append(F)
        memo = {}

        def triangulate(F, d):
            if F in memo:
                return memo[F]
            if d == 0:
                out = [(min(F),)]
            else:
                v0 = min(F)
                out = []
                for G in by_dim.get(d - 1, []):
                    if G < F and v0 not in G:
                        out.extend((v0,) + s for s in triangulate(G, d - 1))
            memo[F] = out
            return out

        full = frozenset(range(len(self.vertices)))
        return triangulate(full, self.dim)

    @cached_property
    def volume(self) -> Fraction:
        total = Fraction(0)
        for s in self.simplices():
            p0 = self.vertices[s[0]]
            M = [list(sub(self.vertices[i], p0)) for i in s[1:]]
            total += abs(determinant(M))
        return total / factorial(self.dim)

    def perimeter(self) -> Fraction:
        """Sum of rational lengths of all edges."""
        return sum(rational_length(Segment(self.vertices[u], self.vertices[w])) for u, w in self.edges)

    # transforms ---------------------------------------------------------

    def translate(self, c) -> "Polytope":
        c = as_rational_vector(c)
        return Polytope._assemble(
            self.dim,
            [(a, b + dot(a, c)) for a, b in self.facets],
            [tuple(x + y for x, y in zip(v, c)) for v in self.vertices],
        )

    def scale(self, lam) -> "Polytope":
        lam = as_fraction(lam)
        if lam <= 0:
            raise NotFullDimensional("scaling by a nonpositive factor")
        return Polytope._assemble(
            self.dim,
            [(a, lam * b) for a, b in self.facets],
            [tuple(lam * x for x in v) for v in self.vertices],
        )

    def image(self, A, c=None) -> "Polytope":
        """The polytope ``A(P) + c`` for an integer matrix ``A`` with det = +-1."""
        n = self.dim
        c = as_rational_vector(c) if c is not None else tuple(Fraction(0) for _ in range(n))
        if abs(determinant([list(r) for r in A])) != 1:
            raise UnsupportedInput("linear part must be unimodular")
        Ainv = inverse(A)
        # <a, x> <= b with x = A^{-1}(y - c) becomes <A^{-T} a, y> <= b + <A^{-T} a, c>
        facets = []
        for a, b in self.facets:
            na = tuple(int(sum(Ainv[i][j] * a[i] for i in range(n))) for j in range(n))
            facets.append((na, b + dot(na, c)))
        verts = [tuple(sum(A[i][j] * v[j] for j in range(n)) + c[i] for i in range(n))
                 for v in self.vertices]
        return Polytope._assemble(n, facets, verts)


@dataclass(frozen=True)
class Segment:
    start: tuple
    end: tuple
    degenerate: bool = False

    def __post_init__(self):
        if not self.degenerate and tuple(self.start) == tuple(self.end):
            raise InvalidParameter("segment endpoints coincide; set degenerate=True")


@dataclass(frozen=True)
class AffineUnimodularMap:
    A: tuple
    c: tuple

    def __post_init__(self):
        if abs(determinant([list(r) for r in self.A])) != 1:
            raise UnsupportedInput("matrix is not unimodular")

    def apply(self, x):
        return tuple(sum(a * xi for a, xi in zip(row, x)) + ci for row, ci in zip(self.A, self.c))

    def apply_polytope(self, P: Polytope) -> Polytope:
        return P.image(self.A, self.c)

    def inverse(self) -> "AffineUnimodularMap":
        Ainv = tuple(tuple(int(x) for x in row) for row in inverse(self.A))
        c = tuple(-sum(a * ci for a, ci in zip(row, self.c)) for row in Ainv)
        return AffineUnimodularMap(Ainv, c)


# builders -----------------------------------------------------------------


def build_from_halfspaces(rows) -> Polytope:
    """Polytope from inequalities ``<a, x> <= b``; redundant rows are dropped."""
    rows = list(rows)
    if not rows:
        raise Unbounded("no inequalities")
    n = len(rows[0][0])
    merged = {}
    for a, b in rows:
        if len(a) != n:
            raise DimensionMismatch("inequalities of different dimensions")
        prim, b = _normalize_row(a, b)
        if prim is None:
            if b < 0:
                raise EmptyPolytope("inequality 0 <= negative")
            continue
        if prim not in merged or b < merged[prim]:
            merged[prim] = b
    normals = sorted(merged)
    if not normals:
        raise Unbounded("no nontrivial inequalities")
    if rank(normals) < n:
        outcome = solve_rational_lp(LPProblem.make(normals, [merged[a] for a in normals]))
        if outcome.feasible:
            raise Unbounded("inequality normals do not span")
        raise EmptyPolytope("inequality system is infeasible")
    # homogenized cone {(x, t) : <a, x> - b t <= 0, -t <= 0}
    cone = [list(a) + [-merged[a]] for a in normals]
    cone.append([0] * n + [-1])
    rays = extreme_rays(cone, dim=n + 1)
    if not rays:
        raise EmptyPolytope("inequality system is infeasible")
    vertices, recession = [], False
    for r in rays:
        t = r[-1]
        if t == 0:
            recession = True
        else:
            vertices.append(tuple(Fraction(x, t) for x in r[:-1]))
    if not vertices:
        raise EmptyPolytope("inequality system is infeasible")
    if recession:
        raise Unbounded("solution set is unbounded")
    if _affine_rank(vertices) < n:
        raise NotFullDimensional("solution set is lower-dimensional")
    facets = []
    for a in normals:
        b = merged[a]
        tight = [v for v in vertices if dot(a, v) == b]
        if len(tight) >= n and _affine_rank(tight) == n - 1:
            facets.append((a, b))
    return Polytope._assemble(n, facets, vertices)


def build_from_vertices(points) -> Polytope:
    """Convex hull of finitely many rational points."""
    pts = sorted({as_rational_vector(p) for p in points})
    if not pts:
        raise NotFullDimensional("no points")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise DimensionMismatch("points of different dimensions")
    if _affine_rank(pts) < n:
        raise NotFullDimensional("points do not affinely span the space")
    # valid inequalities (a, beta) with <a, p> - beta <= 0
    den = reduce(lcm, (x.denominator for p in pts for x in p), 1)
    cone = [[int(x * den) for x in p] + [-den] for p in pts]
    facets = []
    for r in extreme_rays(cone, dim=n + 1):
        a = r[:-1]
        if not any(a):
            continue
        g = reduce(gcd, a, 0)
        facets.append((tuple(x // g for x in a), Fraction(r[-1], g)))
    verts = []
    for p in pts:
        tight = [a for a, b in facets if dot(a, p) == b]
        if len(tight) >= n and rank(tight) == n:
            verts.append(p)
    return Polytope._assemble(n, facets, verts)


def support_value(P: Polytope, alpha) -> Fraction:
    return P.support_value(alpha)


def volume(P: Polytope) -> Fraction:
    return P.volume


def normal_fan(P: Polytope):
    from .fan import Fan
    return Fan.make(P.dim, P.normals, [sorted(inc) for inc in P.incidence])


def _edge_cross_normals(P: Polytope, Q: Polytope):
    def dirs(R):
        _, rows = R._scaled_vertices
        return {primitive_vector(sub(rows[w], rows[u])) for u, w in R.edges}

    out = set()
    for e in dirs(P):
        for f in dirs(Q):
            c = (e[1] * f[2] - e[2] * f[1], e[2] * f[0] - e[0] * f[2], e[0] * f[1] - e[1] * f[0])
            if any(c):
                c = integerize(c)
                out.add(c)
                out.add(tuple(-x for x in c))
    return out


def minkowski_combine(lam, P: Polytope, mu, Q: Polytope) -> Polytope:
    """The polytope ``lam*P + mu*Q`` for nonnegative rational coefficients."""
    lam, mu = as_fraction(lam), as_fraction(mu)
    if P.dim != Q.dim:
        raise DimensionMismatch("Minkowski combination of polytopes of different dimensions")
    if lam < 0 or mu < 0:
        raise InvalidParameter("Minkowski coefficients must be nonnegative")
    if lam == 0 and mu == 0:
        raise NotFullDimensional("both coefficients are zero; the result is a point")
    if mu == 0:
        return P.scale(lam)
    if lam == 0:
        return Q.scale(mu)
    n = P.dim
    candidates = set(P.normals) | set(Q.normals)
    if n == 3:
        candidates |= _edge_cross_normals(P, Q)
    elif n > 3:
        from .fan import common_refinement
        candidates |= set(common_refinement(normal_fan(P), normal_fan(Q)).rays)
    rows, tight_p, tight_q = [], {}, {}
    for u in sorted(candidates):
        hp, ip = P._int_support(u)
        hq, iq = Q._int_support(u)
        fp = [P.vertices[i] for i in ip]
        fq = [Q.vertices[i] for i in iq]
        diffs = [sub(v, fp[0]) for v in fp[1:]] + [sub(v, fq[0]) for v in fq[1:]]
        if (rank(diffs) if diffs else 0) == n - 1:
            rows.append((u, lam * hp + mu * hq))
            for v in fp:
                tight_p.setdefault(v, set()).add(u)
            for v in fq:
                tight_q.setdefault(v, set()).add(u)
    # lam*p + mu*q is tight exactly on the rows tight at p and at q; rank n makes it a vertex
    verts = set()
    for p, Tp in tight_p.items():
        for q, Tq in tight_q.items():
            common = Tp & Tq
            if len(common) >= n and rank(list(common)) == n:
                verts.add(tuple(lam * a + mu * b for a, b in zip(p, q)))
    return Polytope._assemble(n, rows, verts)


def intersect(P: Polytope, Q: Polytope):
    """Intersection as a polytope, or None when empty or lower-dimensional."""
    if P.dim != Q.dim:
        raise DimensionMismatch("intersection of polytopes of different dimensions")
    try:
        return build_from_halfspaces(list(P.facets) + list(Q.facets))
    except (EmptyPolytope, NotFullDimensional):
        return None


def rational_length(s: Segment) -> Fraction:
    d = sub(as_rational_vector(s.end), as_rational_vector(s.start))
    if not any(d):
        return Fraction(0)
    u = integerize(d)
    i = next(k for k, x in enumerate(u) if x)
    return d[i] / u[i]


def delzant_failure(P: Polytope):
    """None when P is Delzant, otherwise ``(reason, vertex)``."""
    for i, inc in enumerate(P.incidence):
        if len(inc) != P.dim:
            return "simple", P.vertices[i]
    for i in range(len(P.vertices)):
        dirs = P.edge_directions(i)
        if len(dirs) != P.dim or abs(determinant([list(d) for d in dirs])) != 1:
            return "smooth", P.vertices[i]
    return None


def agl_congruent(P: Polytope, Q: Polytope):
    """An affine unimodular map taking P onto Q, or None."""
    if delzant_failure(P) is not None or delzant_failure(Q) is not None:
        raise UnsupportedInput("congruence search requires Delzant polytopes")
    if P.dim != Q.dim or len(P.vertices) != len(Q.vertices) or len(P.facets) != len(Q.facets):
        return None
    if P.volume != Q.volume:
        return None
    n = P.dim
    p0 = P.vertices[0]
    E = P.edge_directions(0)
    Einv = inverse([[E[j][i] for j in range(n)] for i in range(n)])
    target = set(Q.vertices)
    for qi, q in enumerate(Q.vertices):
        F = Q.edge_directions(qi)
        for perm in permutations(range(n)):
            Fm = [[F[perm[j]][i] for j in range(n)] for i in range(n)]
            A = tuple(tuple(int(sum(Fm[i][k] * Einv[k][j] for k in range(n))) for j in range(n))
                      for i in range(n))
            c = tuple(q[i] - sum(A[i][j] * p0[j] for j in range(n)) for i in range(n))
            image = {tuple(sum(A[i][j] * v[j] for j in range(n)) + c[i] for i in range(n))
                     for v in P.vertices}
            if image == target:
                return AffineUnimodularMap(A, c)
    return None
