"""Deterministic builders for the named polytopes and fans used as a test corpus."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import DimensionMismatch, InternalInconsistency, InvalidParameter
from .exactmath.linalg import as_fraction, inverse, rank
from .fan import Cone, Fan, blow_up, fan_properties
from .polytope import Polytope, build_from_halfspaces, build_from_vertices


def delzant_triangle(lam=1) -> Polytope:
    """``x1 >= 0, x2 >= 0, x1 + x2 <= lam``."""
    lam = as_fraction(lam)
    if lam <= 0:
        raise InvalidParameter("triangle size must be positive")
    return build_from_halfspaces([((-1, 0), 0), ((0, -1), 0), ((1, 1), lam)])


def hirzebruch_trapezoid(a, b, k) -> Polytope:
    """``-b/2 <= x2 <= b/2, 0 <= x1 <= a - k x2``."""
    a, b = as_fraction(a), as_fraction(b)
    k = int(k)
    if a <= 0 or b <= 0 or k < 0 or 2 * a <= b * k:
        raise InvalidParameter("need a, b > 0, k >= 0 and 2a > bk")
    return build_from_halfspaces(
        [((0, -1), b / 2), ((0, 1), b / 2), ((-1, 0), 0), ((1, k), a)]
    )


def hirzebruch_fan(k) -> Fan:
    k = int(k)
    d, u, l, r = (0, -1), (0, 1), (-1, 0), (1, k)
    return Fan.from_cones(2, [[d, l], [l, u], [u, r], [r, d]])


def cube(n=3, side=1) -> Polytope:
    side = as_fraction(side)
    rows = []
    for i in range(n):
        e = tuple(int(i == j) for j in range(n))
        rows.append((e, side))
        rows.append((tuple(-x for x in e), 0))
    return build_from_halfspaces(rows)


def prism(polygon: Polytope, height=1) -> Polytope:
    """Product of a polytope with the interval [0, height]."""
    height = as_fraction(height)
    n = polygon.dim
    rows = [(tuple(a) + (0,), b) for a, b in polygon.facets]
    rows.append(((0,) * n + (1,), height))
    rows.append(((0,) * n + (-1,), 0))
    return build_from_halfspaces(rows)


def regular_polygon_like(m: int) -> Polytope:
    """A Delzant m-gon for m >= 3, obtained by chopping corners of the unit square or triangle."""
    from .moduli import corner_chop
    P = delzant_triangle(4) if m == 3 else cube(2, 4)
    while len(P.facets) < m:
        v = max(P.vertices)
        lengths = _edge_lengths_at(P, P.vertices.index(v))
        P = corner_chop(P, v, min(lengths) / 3)
    return P


def _edge_lengths_at(P: Polytope, i):
    from .polytope import Segment, rational_length
    out = []
    for u, w in P.edges:
        if i in (u, w):
            out.append(rational_length(Segment(P.vertices[u], P.vertices[w])))
    return out


def moae_fan(unimodular: bool = False) -> Fan:
    """Six rays -e_i and a_i = (1,1,1) - e_i forming a triangular prism whose square sides
    are cut by the diagonals (-e1,a2), (-e2,a3), (-e3,a1). One cone has multiplicity 2;
    the unimodular variant subdivides it at (1,1,1)."""
    m = [(-1, 0, 0), (0, -1, 0), (0, 0, -1)]
    a = [(0, 1, 1), (1, 0, 1), (1, 1, 0)]
    cones = [m, a]
    for i in range(3):
        j = (i + 1) % 3
        cones.append([m[i], m[j], a[j]])
        cones.append([m[i], a[j], a[i]])
    fan = Fan.from_cones(3, cones)
    if unimodular:
        fan = blow_up_at(fan, (1, 1, 1))
    return fan


def blow_up_at(fan: Fan, gamma) -> Fan:
    from .fan import stellar_subdivision
    return stellar_subdivision(fan, gamma)


_CUBOCTA_RAYS = sorted(
    {tuple(v) for v in product((-1, 0, 1), repeat=3) if sum(1 for x in v if x) == 2}
)


def _cubocta_cones(diagonals):
    cones = []
    for s in product((-1, 1), repeat=3):
        cones.append([(s[0], s[1], 0), (s[0], 0, s[2]), (0, s[1], s[2])])
    for axis, sign in product(range(3), (-1, 1)):
        others = [i for i in range(3) if i != axis]
        quad = []
        for i in others:
            for t in (-1, 1):
                v = [0, 0, 0]
                v[axis] = sign
                v[i] = t
                quad.append(tuple(v))
        # quad = [p(i0,-), p(i0,+), p(i1,-), p(i1,+)]; opposite pairs share the varying axis
        choice = diagonals[2 * axis + (sign > 0)]
        d1, d2 = (quad[0], quad[1]) if choice == 0 else (quad[2], quad[3])
        o1, o2 = (quad[2], quad[3]) if choice == 0 else (quad[0], quad[1])
        cones.append([d1, d2, o1])
        cones.append([d1, d2, o2])
    return cones


def cubocta_diagonals():
    """First choice of square diagonals (in a fixed enumeration order) using every ray once."""
    for diagonals in product((0, 1), repeat=6):
        used = []
        for axis, sign in product(range(3), (-1, 1)):
            choice = diagonals[2 * axis + (sign > 0)]
            i = [j for j in range(3) if j != axis][choice]
            for t in (-1, 1):
                v = [0, 0, 0]
                v[axis] = sign
                v[i] = t
                used.append(tuple(v))
        if len(set(used)) == 12:
            return diagonals
    raise InternalInconsistency("no balanced diagonal choice found")


def cubocta_fan(rescaled: bool = False) -> Fan:
    """Cones over a triangulated cuboctahedron. Cone determinants are +-2; the rescaled
    variant expresses the rays in a basis of the even sublattice and is unimodular."""
    cones = _cubocta_cones(cubocta_diagonals())
    if rescaled:
        B = [[1, 1, 0], [1, 0, 1], [0, 1, 1]]  # columns span {x+y+z even}
        Binv = inverse(B)
        cones = [[tuple(int(sum(Binv[i][j] * v[j] for j in range(3))) for i in range(3)) for v in c]
                 for c in cones]
    return Fan.from_cones(3, cones)


def isolated_fan(k: int) -> Fan:
    """The fan on alpha_1..4 and beta_{-1..k}; unimodular, complete, polytopal, and not a
    proper refinement of another unimodular fan."""
    k = int(k)
    if k < 1:
        raise InvalidParameter("k must be positive")
    a1, a2 = (0, 0, -1), (1, 1, 0)
    a3, a4 = (k, k + 1, 1), (k + 1, k, 1)

    def beta(i):
        return (i, i, 1)

    cones = [
        [beta(-1), a1, a3], [a1, a2, a3], [beta(-1), a1, a4], [a1, a2, a4],
        [a2, a3, a4], [beta(k), a3, a4],
    ]
    for i in range(0, k + 1):
        cones.append([beta(i - 1), beta(i), a4])
        cones.append([beta(i - 1), beta(i), a3])
    return Fan.from_cones(3, cones)


def _vsum(*vs):
    return tuple(sum(x) for x in zip(*vs))


@dataclass(frozen=True)
class HardenedFan:
    fan: Fan
    original_rays: tuple
    blowup_rays: tuple
    edge_rays: tuple
    center_rays: tuple


def harden_3fan_detailed(fan: Fan) -> HardenedFan:
    from .desingularize import desingularize

    if fan.dim != 3:
        raise DimensionMismatch("harden_3fan works on 3-dimensional fans")
    if not fan_properties(fan).unimodular:
        fan, _ = desingularize(fan)
    original = fan.rays
    blowups = []
    mid = fan
    for gens in fan.cones_as_vectors():
        gamma = _vsum(*gens)
        blowups.append(gamma)
        mid = blow_up(mid, gens)
    cones, edge_rays, centers = [], set(), set()
    for a1, a2, a3 in mid.cones_as_vectors():
        a12, a13, a23 = _vsum(a1, a2), _vsum(a1, a3), _vsum(a2, a3)
        a123 = _vsum(a1, a2, a3)
        edge_rays |= {a12, a13, a23}
        centers.add(a123)
        cones += [
            [a1, a12, a13], [a2, a12, a23], [a3, a13, a23],
            [a123, a12, a13], [a123, a12, a23], [a123, a13, a23],
        ]
    out = Fan.from_cones(3, cones)
    return HardenedFan(out, tuple(original), tuple(sorted(blowups)),
                       tuple(sorted(edge_rays)), tuple(sorted(centers)))


def harden_3fan(fan: Fan) -> Fan:
    """Unimodular refinement admitting no blow-down: blow up every maximal cone, then split
    every cone into six around its edge sums and its total sum."""
    return harden_3fan_detailed(fan).fan


def ray_case_signature(fan: Fan, r: int):
    """Which obstruction prevents blowing down ray ``r``: 'valency>=6', 'sum=4a', 'sum=2a', or None."""
    rep = fan_properties(fan)
    val = rep.valency[r]
    if val >= 6:
        return "valency>=6"
    if val == 3:
        gamma = fan.rays[r]
        nbrs = set()
        for i in fan.star(r):
            nbrs |= set(fan.maximal_cones[i]) - {r}
        s = _vsum(*(fan.rays[j] for j in nbrs))
        if s == tuple(4 * x for x in gamma):
            return "sum=4a"
        if s == tuple(2 * x for x in gamma):
            return "sum=2a"
    return None


@dataclass(frozen=True)
class NonlocalInstance:
    P: Polytope
    P_k: Polytope
    C_k: Cone


def nonlocal_sequence(k: int) -> NonlocalInstance:
    """The standard tetrahedron and its perturbation whose normal fan contains C_k."""
    k = int(k)
    if k < 1:
        raise InvalidParameter("k must be positive")
    P = build_from_vertices([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
    Pk = build_from_vertices([(0, 0, 0), (1, Fraction(1, k + 1), Fraction(-1, k)), (0, 1, 0), (0, 0, 1)])
    Ck = Cone.make([(-1, 0, -k), (1, -k - 1, 0)])
    return NonlocalInstance(P, Pk, Ck)


# corpus -------------------------------------------------------------------


@dataclass
class NamedConstruction:
    identifier: str
    parameters: dict
    obj: object
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _build(name, params):
    builders = {
        "triangle": lambda p: delzant_triangle(p.get("lam", 1)),
        "hirzebruch_trapezoid": lambda p: hirzebruch_trapezoid(p.get("a", 3), p.get("b", 2), p.get("k", 1)),
        "hirzebruch_fan": lambda p: hirzebruch_fan(p.get("k", 1)),
        "cube": lambda p: cube(p.get("n", 3)),
        "prism": lambda p: prism(regular_polygon_like(p.get("m", 5))),
        "moae": lambda p: moae_fan(False),
        "moae_unimodular": lambda p: moae_fan(True),
        "cubocta": lambda p: cubocta_fan(False),
        "cubocta_rescaled": lambda p: cubocta_fan(True),
        "isolated": lambda p: isolated_fan(p.get("k", 1)),
        "harden_simplex_fan": lambda p: harden_3fan(simplex_fan(3)),
        "nonlocal": lambda p: nonlocal_sequence(p.get("k", 1)),
    }
    if name not in builders:
        raise KeyError(name)
    return builders[name](params)


CONSTRUCTION_NAMES = (
    "triangle", "hirzebruch_trapezoid", "hirzebruch_fan", "cube", "prism", "moae",
    "moae_unimodular", "cubocta", "cubocta_rescaled", "isolated", "harden_simplex_fan", "nonlocal",
)


def construct(name: str, **params):
    return _build(name, params)


def simplex_fan(n: int = 3) -> Fan:
    """Complete fan on e_1, ..., e_n and -(e_1 + ... + e_n)."""
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = [[r for j, r in enumerate(rays) if j != i] for i in range(n + 1)]
    return Fan.from_cones(n, cones)


def corpus_polytopes() -> list:
    """Delzant polytopes of the named families, used by the batch checks."""
    out = [("triangle(1)", delzant_triangle(1)), ("triangle(2)", delzant_triangle(2))]
    for a, b, k in [(3, 2, 1), (2, 1, 0), (5, 2, 3), (Fraction(7, 2), 1, 4)]:
        out.append((f"hirzebruch({a},{b},{k})", hirzebruch_trapezoid(a, b, k)))
    out.append(("square", cube(2)))
    out.append(("cube", cube(3)))
    for m in (5, 6):
        out.append((f"prism({m})", prism(regular_polygon_like(m))))
    out.append(("prism(triangle)", prism(delzant_triangle(1))))
    for k in (1, 2, 3):
        res = _realized("isolated", isolated_fan(k))
        out.append((f"isolated({k})", res))
    return out


def _realized(name, fan):
    from .fan import realize_polytopal
    res = realize_polytopal(fan)
    if not isinstance(res, Polytope):
        raise InternalInconsistency(f"{name} should be polytopal")
    return res


def run_corpus() -> list:
    """Evaluate every construction's checklist; returns NamedConstruction records."""
    from .fan import NotPolytopal, find_blow_downs, realize_polytopal, refines
    from .metrics import hausdorff_distance
    from .moduli import is_delzant
    from .polytope import normal_fan

    out = []

    def rec(name, params, obj, checks):
        out.append(NamedConstruction(name, params, obj, checks))

    T = delzant_triangle(2)
    rec("triangle", {"lam": 2}, T, {"facets=3": len(T.facets) == 3, "area=2": T.volume == 2,
                                     "delzant": is_delzant(T).delzant})
    H = hirzebruch_trapezoid(3, 2, 1)
    rec("hirzebruch_trapezoid", {"a": 3, "b": 2, "k": 1}, H,
        {"facets=4": len(H.facets) == 4, "delzant": is_delzant(H).delzant})
    for k in range(0, 4):
        F = hirzebruch_fan(k)
        rep = fan_properties(F)
        rec("hirzebruch_fan", {"k": k}, F, {"complete": rep.complete, "unimodular": rep.unimodular,
                                          "rays=4": len(F.rays) == 4,
                                          "polytopal": isinstance(realize_polytopal(F), Polytope)})
    C = cube(3)
    rec("cube", {"n": 3}, C, {"delzant": is_delzant(C).delzant, "volume=1": C.volume == 1})
    Pr = prism(regular_polygon_like(5))
    rec("prism", {"m": 5}, Pr, {
        "delzant": is_delzant(Pr).delzant, "facets=7": len(Pr.facets) == 7,
        "no triangular facet": all(len(Pr.facet_vertices(j)) > 3 for j in range(len(Pr.facets)))})
    M = moae_fan(False)
    rep = fan_properties(M)
    rec("moae", {}, M, {"rays=6": len(M.rays) == 6, "cones=8": len(M.maximal_cones) == 8,
                        "one multiplicity-2 cone": sorted(rep.multiplicities) == [1] * 7 + [2],
                        "complete": rep.complete})
    MU = moae_fan(True)
    rep = fan_properties(MU)
    res = realize_polytopal(MU)
    rec("moae_unimodular", {}, MU, {
        "rays=7": len(MU.rays) == 7, "cones=10": len(MU.maximal_cones) == 10,
        "unimodular": rep.unimodular, "complete": rep.complete,
        "refines base": refines(MU, M),
        "not polytopal": isinstance(res, NotPolytopal) and res.verify()})
    CO = cubocta_fan(False)
    rep = fan_properties(CO)
    rec("cubocta", {}, CO, {"rays=12": len(CO.rays) == 12, "cones=20": len(CO.maximal_cones) == 20,
                            "all |det|=2": all(m == 2 for m in rep.multiplicities),
                            "complete": rep.complete})
    CR = cubocta_fan(True)
    rep = fan_properties(CR)
    res = realize_polytopal(CR)
    rec("cubocta_rescaled", {}, CR, {"unimodular": rep.unimodular, "complete": rep.complete,
                                     "not polytopal": isinstance(res, NotPolytopal) and res.verify()})
    for k in range(1, 6):
        N = isolated_fan(k)
        rep = fan_properties(N)
        rec("isolated", {"k": k}, N, {
            f"rays={k + 6}": len(N.rays) == k + 6, f"cones={2 * k + 8}": len(N.maximal_cones) == 2 * k + 8,
            "unimodular": rep.unimodular, "complete": rep.complete,
            "polytopal": isinstance(realize_polytopal(N), Polytope),
            "no blow-downs": find_blow_downs(N) == []})
    S = simplex_fan(3)
    Hd = harden_3fan(S)
    rep = fan_properties(Hd)
    rec("harden_simplex_fan", {}, Hd, {
        "unimodular": rep.unimodular, "complete": rep.complete, "refines input": refines(Hd, S),
        "no blow-downs": find_blow_downs(Hd) == [],
        "ray signatures": all(ray_case_signature(Hd, r) is not None for r in range(len(Hd.rays)))})
    for k in (1, 2, 3):
        inst = nonlocal_sequence(k)
        d2 = hausdorff_distance(inst.P, inst.P_k).squared
        NPk = normal_fan(inst.P_k)
        from .exactmath.linalg import lattice_determinant
        rec("nonlocal", {"k": k}, inst.P_k, {
            "hausdorff < 2/k": d2 < Fraction(4, k * k),
            "C_k is a cone of the fan": _fan_has_face(NPk, inst.C_k.generators),
            "C_k multiplicity 1": inst.C_k.multiplicity == 1,
            "det with (1,1,k+1) = 1": lattice_determinant(
                [(-1, 0, -k), (1, -k - 1, 0), (1, 1, k + 1)]) == 1,
            "does not refine": not refines(NPk, normal_fan(inst.P))})
    return out


def _fan_has_face(fan: Fan, gens) -> bool:
    idx = [fan.ray_index(g) for g in gens]
    return None not in idx and fan.is_face(idx)
