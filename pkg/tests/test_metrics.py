import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from delzant.constructions import cube
from delzant.errors import DimensionMismatch
from delzant.metrics import hausdorff_distance, support_uniform_norm_estimate, symmetric_difference_distance
from delzant.polytope import build_from_vertices, minkowski_combine
from strategies import delzant_polygons, delzant_solids, unimodular_maps_2d

F = Fraction
fracs = st.fractions(0, 1, max_denominator=6)


def rect(w, h):
    return build_from_vertices([(0, 0), (w, 0), (0, h), (w, h)])


@pytest.mark.parametrize("k", range(1, 6))
def test_sheared_pair(k):
    P = build_from_vertices([(0, 0), (1, 0), (k, 1)])
    Q = build_from_vertices([(0, 0), (1, 0), (k - 1, 1), (k, 1)])
    d = hausdorff_distance(P, Q)
    assert d.squared == F(1, k * k + 1)
    assert math.isclose(d.value, 1 / math.sqrt(k * k + 1), rel_tol=1e-12)


def test_square_examples():
    S1, S2 = cube(2), cube(2, 2)
    d = hausdorff_distance(S1, S2)
    assert d.squared == 2 and d.witness[0] == (2, 2) and d.witness[1] == (1, 1)
    assert math.isclose(d.value, oracles.hausdorff_sampled_2d(S1.vertices, S2.vertices), abs_tol=1e-2)
    assert symmetric_difference_distance(S1, S2).exact == 3
    assert symmetric_difference_distance(S1, S1.translate((5, 0))).exact == 2
    assert hausdorff_distance(S1, S1).squared == 0
    assert symmetric_difference_distance(S1, S1).exact == 0


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        hausdorff_distance(cube(2), cube(3))


@pytest.mark.parametrize("m", range(1, 7))
def test_rectangle_sequence(m):
    R1, R2 = rect(m, F(1, m * m)), rect(2 * m, F(1, 4 * m * m))
    assert symmetric_difference_distance(R1, R2).exact < F(3, m)
    assert hausdorff_distance(R1, R2).squared >= 1


@given(delzant_polygons, delzant_polygons)
def test_against_sampled_oracle(P, Q):
    exact = hausdorff_distance(P, Q).value
    sampled = oracles.hausdorff_sampled_2d(P.vertices, Q.vertices, per_edge=200)
    assert sampled <= exact + 1e-9
    assert exact - sampled <= 0.05 * max(1.0, exact)


@given(delzant_polygons, delzant_polygons)
def test_support_estimate_lower_bound(P, Q):
    exact = hausdorff_distance(P, Q).value
    est = support_uniform_norm_estimate(P, Q, 2000)
    assert est <= exact + 1e-9
    assert exact - est <= 0.05 * max(1.0, exact)


@given(delzant_polygons, st.tuples(fracs, fracs))
def test_translation(P, c):
    Q = P.translate(c)
    assert hausdorff_distance(P, Q).squared == c[0] ** 2 + c[1] ** 2
    assert support_uniform_norm_estimate(P, Q, 500) <= math.hypot(*c) + 1e-12


@given(delzant_polygons, delzant_polygons, delzant_polygons)
def test_metric_axioms(P, Q, R):
    for f in (hausdorff_distance, symmetric_difference_distance):
        assert f(P, Q).value == f(Q, P).value
    dV = lambda A, B: symmetric_difference_distance(A, B).exact
    assert dV(P, R) <= dV(P, Q) + dV(Q, R)
    dH = lambda A, B: hausdorff_distance(A, B).value
    assert dH(P, R) <= dH(P, Q) + dH(Q, R) + 1e-9
    assert hausdorff_distance(P, Q).squared == hausdorff_distance(Q, P).squared
    assert (hausdorff_distance(P, Q).squared == 0) == (P == Q)


@given(delzant_polygons, delzant_polygons, unimodular_maps_2d)
def test_symdiff_invariant_under_shared_map(P, Q, M):
    a = symmetric_difference_distance(P, Q).exact
    b = symmetric_difference_distance(M.apply_polytope(P), M.apply_polytope(Q)).exact
    assert a == b


@given(delzant_polygons, delzant_polygons, fracs, fracs)
def test_minkowski_segment_lipschitz(P, Q, lam, mu):
    A = minkowski_combine(lam, P, 1 - lam, Q)
    B = minkowski_combine(mu, P, 1 - mu, Q)
    # support functions are affine in the parameter, so the constant is exactly d_H(P, Q)
    assert hausdorff_distance(A, B).squared <= (lam - mu) ** 2 * hausdorff_distance(P, Q).squared


@given(delzant_solids, delzant_solids)
def test_3d_support_estimate_is_lower_bound(P, Q):
    exact = hausdorff_distance(P, Q).value
    est = support_uniform_norm_estimate(P, Q, 5000)
    assert est <= exact + 1e-9
    assert exact - est <= 0.1 * max(1.0, exact)


def test_json_shape():
    js = hausdorff_distance(cube(2), cube(2, 2)).to_json()
    assert js["metric"] == "hausdorff" and js["squared_exact"] == "2"
    js = symmetric_difference_distance(cube(2), cube(2, 2)).to_json()
    assert js["metric"] == "symdiff" and js["squared_exact"] is None and js["value"] == 3.0
