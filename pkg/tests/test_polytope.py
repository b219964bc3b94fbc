from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from delzant.constructions import cube, delzant_triangle, hirzebruch_trapezoid, prism, regular_polygon_like
from delzant.errors import EmptyPolytope, NotFullDimensional, Unbounded, UnsupportedInput
from delzant.exactmath import lattice_determinant
from delzant.fan import common_refinement
from delzant.moduli import corner_chop, is_delzant, vertex_cone
from delzant.polytope import (
    AffineUnimodularMap,
    Segment,
    agl_congruent,
    build_from_halfspaces,
    build_from_vertices,
    intersect,
    minkowski_combine,
    normal_fan,
    rational_length,
    support_value,
    volume,
)
from strategies import delzant_polygons, delzant_solids, unimodular_maps_2d, unimodular_maps_3d

F = Fraction


def verts(*pts):
    return tuple(sorted(tuple(F(x) for x in p) for p in pts))


# construction ---------------------------------------------------------------------


def test_triangle_from_halfspaces():
    T = build_from_halfspaces([((-1, 0), 0), ((0, -1), 0), ((1, 1), 1)])
    assert T.vertices == verts((0, 0), (1, 0), (0, 1))
    assert len(T.facets) == 3


def test_redundant_row_dropped():
    T = build_from_halfspaces([((-1, 0), 0), ((0, -1), 0), ((1, 1), 1), ((1, 0), 5)])
    assert T == delzant_triangle(1)
    assert len(T.facets) == 3


def test_construction_errors():
    with pytest.raises(EmptyPolytope):
        build_from_halfspaces([((1,), 0), ((-1,), -1)])
    with pytest.raises(Unbounded):
        build_from_halfspaces([((-1, 0), 0), ((0, -1), 0)])
    with pytest.raises(NotFullDimensional):
        build_from_halfspaces([((1, 0), 0), ((-1, 0), 0), ((0, 1), 1), ((0, -1), 0)])
    with pytest.raises(NotFullDimensional):
        build_from_vertices([(0, 0), (1, 1), (2, 2)])


def test_vertices_examples():
    S = build_from_vertices([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert len(S.facets) == 4 and S == cube(2)
    T = build_from_vertices([(0, 0), (1, 0), (0, 1), (F(1, 2), F(1, 2))])
    assert T == delzant_triangle(1)
    H = build_from_vertices([(0, -1), (0, 1), (2, 1), (4, -1)])
    assert H == hirzebruch_trapezoid(3, 2, 1)


@given(delzant_polygons)
def test_round_trip_and_subset_oracle(P):
    assert build_from_vertices(P.vertices) == P
    assert build_from_halfspaces(P.facets) == P
    assert list(P.vertices) == oracles.vertices_by_subsets(list(P.facets))


@given(delzant_solids)
def test_round_trip_3d(P):
    assert build_from_vertices(P.vertices) == P
    assert list(P.vertices) == oracles.vertices_by_subsets(list(P.facets))


@given(delzant_polygons)
def test_incidence_consistent(P):
    for v, inc in zip(P.vertices, P.incidence):
        assert len(inc) >= P.dim
        for j, (a, b) in enumerate(P.facets):
            lhs = sum(x * y for x, y in zip(a, v))
            assert lhs <= b
            assert (lhs == b) == (j in inc)


# support values, normal fans ---------------------------------------------------------


def test_support_examples():
    assert support_value(delzant_triangle(1), (1, 1)) == 1
    assert support_value(cube(2), (1, 0)) == 1


def test_normal_fan_examples():
    for k in range(4):
        N = normal_fan(hirzebruch_trapezoid(3 + k, 2, k))
        assert set(N.rays) == {(0, -1), (0, 1), (-1, 0), (1, k)}
        assert len(N.maximal_cones) == 4
    N = normal_fan(delzant_triangle(2))
    assert set(N.rays) == {(-1, 0), (0, -1), (1, 1)} and len(N.maximal_cones) == 3
    N = normal_fan(cube(3))
    assert len(N.rays) == 6 and len(N.maximal_cones) == 8


@given(delzant_polygons, delzant_polygons, st.tuples(st.integers(-5, 5), st.integers(-5, 5)),
       st.fractions(0, 3, max_denominator=5), st.fractions(0, 3, max_denominator=5))
def test_minkowski_support_additive(P, Q, alpha, lam, mu):
    if lam == 0 and mu == 0:
        return
    S = minkowski_combine(lam, P, mu, Q)
    assert S.support_value(alpha) == lam * P.support_value(alpha) + mu * Q.support_value(alpha)


@given(delzant_polygons, delzant_polygons)
def test_minkowski_fan_is_common_refinement(P, Q):
    S = minkowski_combine(1, P, 1, Q)
    assert normal_fan(S) == common_refinement(normal_fan(P), normal_fan(Q))
    expected = oracles.common_refinement_cones_2d(normal_fan(P).rays, normal_fan(Q).rays)
    assert sorted(normal_fan(S).rays) == sorted(expected)


@given(delzant_solids, delzant_solids)
def test_minkowski_3d_against_hull(P, Q):
    S = minkowski_combine(1, P, 1, Q)
    hull = build_from_vertices([tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices])
    assert S == hull


def test_minkowski_examples():
    P = delzant_triangle(1)
    assert minkowski_combine(1, P, 0, cube(2)) == P
    assert minkowski_combine(F(1, 2), P, F(1, 2), P) == P
    R = build_from_vertices([(0, 0), (-1, 0), (0, 1)])
    pent = minkowski_combine(1, P, 1, R)
    assert len(pent.facets) == 5
    assert not is_delzant(pent)


def test_intersection_examples():
    S = cube(2)
    assert intersect(S, S) == S
    shifted = S.translate((F(1, 2), F(1, 2)))
    assert intersect(S, shifted).volume == F(1, 4)
    assert intersect(S, S.translate((3, 0))) is None


# volume, lengths --------------------------------------------------------------------


def test_volume_examples():
    assert volume(cube(3)) == 1
    for lam in (1, 2, F(3, 2)):
        assert volume(delzant_triangle(lam)) == F(lam) ** 2 / 2


@given(delzant_solids)
def test_volume_monte_carlo(P):
    est = oracles.monte_carlo_volume(P.vertices, P.facets, samples=200_000, seed=1)
    assert abs(est - float(P.volume)) <= 0.02 * float(P.volume) + 1e-3


def test_rational_length_examples():
    assert rational_length(Segment((0, 0), (3, 0))) == 3
    assert rational_length(Segment((0, 0), (2, 4))) == 2
    for lam in (1, F(5, 2)):
        assert delzant_triangle(lam).perimeter() == 3 * F(lam)


@given(delzant_polygons, unimodular_maps_2d)
def test_volume_and_delzant_invariant_under_maps(P, M):
    Q = M.apply_polytope(P)
    assert Q.volume == P.volume
    assert bool(is_delzant(Q)) == bool(is_delzant(P))
    assert Q.perimeter() == P.perimeter()


@given(delzant_polygons)
def test_edge_directions_integral(P):
    for i in range(len(P.vertices)):
        for d in P.edge_directions(i):
            assert all(isinstance(x, int) for x in d)


@given(delzant_solids)
def test_tangent_cone_and_normal_cone_unimodular_together(P):
    for i, v in enumerate(P.vertices):
        edges = lattice_determinant(P.edge_directions(i)) == 1
        normals = lattice_determinant(vertex_cone(P, v)) == 1
        assert edges == normals


# congruence --------------------------------------------------------------------------


def test_agl_examples():
    P = delzant_triangle(2)
    M = agl_congruent(P, P.translate((1, F(1, 3))))
    assert M is not None and M.apply_polytope(P) == P.translate((1, F(1, 3)))
    A = ((1, 0), (1, 1))
    M = agl_congruent(P, P.image(A))
    assert M is not None and M.apply_polytope(P) == P.image(A)
    # H_{a,b,1} is a chopped triangle of size a + b/2
    a, b = F(3), F(2)
    T = delzant_triangle(a + b / 2)
    chopped = corner_chop(T, (a + b / 2, 0), b)
    assert agl_congruent(hirzebruch_trapezoid(a, b, 1), chopped) is not None


def test_agl_rejects_non_delzant():
    R = build_from_vertices([(0, 0), (-1, 0), (0, 1)])
    pent = minkowski_combine(1, delzant_triangle(1), 1, R)
    with pytest.raises(UnsupportedInput):
        agl_congruent(pent, pent)


def test_agl_distinguishes():
    assert agl_congruent(delzant_triangle(1), delzant_triangle(2)) is None
    assert agl_congruent(hirzebruch_trapezoid(3, 2, 1), hirzebruch_trapezoid(4, 2, 2)) is None


@given(delzant_polygons, unimodular_maps_2d)
def test_agl_symmetric(P, M):
    Q = M.apply_polytope(P)
    found = agl_congruent(P, Q)
    assert found is not None and found.apply_polytope(P) == Q
    back = found.inverse()
    assert back.apply_polytope(Q) == P
    assert agl_congruent(Q, P) is not None


@given(delzant_solids, unimodular_maps_3d)
def test_agl_3d(P, M):
    Q = M.apply_polytope(P)
    found = agl_congruent(P, Q)
    assert found is not None and found.apply_polytope(P) == Q


def test_unimodular_map_checks_determinant():
    with pytest.raises(UnsupportedInput):
        AffineUnimodularMap(((2, 0), (0, 1)), (0, 0))


def test_prism_of_pentagon():
    P = prism(regular_polygon_like(5))
    assert is_delzant(P)
    assert len(P.facets) == 7
    assert all(len(P.facet_vertices(j)) >= 4 for j in range(7))
