"""Acceptance suite: one test per criterion, with a PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""
import os
import random
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(__file__))

import oracles  # noqa: E402
from delzant.constructions import (  # noqa: E402
    corpus_polytopes,
    harden_3fan_detailed,
    isolated_fan,
    moae_fan,
    ray_case_signature,
    simplex_fan,
)
from delzant.desingularize import desingularize  # noqa: E402
from delzant.fan import (  # noqa: E402
    NotPolytopal,
    SecondaryCone,
    blow_up,
    config_cone,
    fan_properties,
    find_blow_downs,
    realize_polytopal,
    refines,
    secondary_cone,
    stratum_info,
)
from delzant.metrics import hausdorff_distance, support_uniform_norm_estimate, symmetric_difference_distance  # noqa: E402
from delzant.moduli import (  # noqa: E402
    check_lower_bound,
    check_polygon_area_bound,
    classify_delzant_polygon,
    corner_chop,
    edge_lengths_at,
    is_delzant,
    minkowski_path,
    vertex_cone,
)
from delzant.polytope import Polytope, agl_congruent, build_from_vertices, normal_fan  # noqa: E402
from delzant.sampling import random_complete_fan, random_delzant_3d, random_delzant_polygon  # noqa: E402

F = Fraction
RESULTS = {}


def record(n, check):
    """Run a check, remember PASS/FAIL for the summary, and re-raise failures."""
    try:
        check()
    except Exception:
        RESULTS[n] = "FAIL"
        raise
    RESULTS[n] = "PASS"


def summary_lines():
    return [f"criterion {n:2d}: {RESULTS[n]}" for n in sorted(RESULTS)]


def _closed(rows, m):
    return SecondaryCone(m, (), tuple((tuple(r), False) for r in rows))


def _in_cone_2d(x, g1, g2):
    d = g1[0] * g2[1] - g1[1] * g2[0]
    s = x[0] * g2[1] - x[1] * g2[0]
    t = g1[0] * x[1] - g1[1] * x[0]
    return s * d >= 0 and t * d >= 0


def _check_path(path, per_segment):
    for s, t, X in path.sample(per_segment):
        assert is_delzant(X)
        if 0 < t < 1:
            assert normal_fan(X) == path.interior_fans[s]


# ----------------------------------------------------------------------------------------


def test_criterion_01_hirzebruch_config_cone():
    def check():
        for k in range(1, 6):
            got = config_cone([(0, -1), (0, 1), (-1, 0), (1, k)]).irredundant()
            want = _closed([(1, 1, 0, 0), (0, -k, 1, 1)], 4)
            assert got.implies(want) and want.implies(got)
    record(1, check)


def test_criterion_02_moae_pipeline():
    def check():
        base = moae_fan()
        assert sorted(fan_properties(base).multiplicities).count(2) == 1
        assert max(fan_properties(base).multiplicities) == 2
        out, trace = desingularize(base)
        assert trace.inserted == [(1, 1, 1)]
        rep = fan_properties(out)
        assert len(out.rays) == 7 and len(out.maximal_cones) == 10
        assert rep.unimodular and rep.complete
        res = realize_polytopal(out)
        assert isinstance(res, NotPolytopal) and res.verify()
    record(2, check)


@pytest.mark.xfail(strict=True, reason="the listed cone on alpha_2, alpha_3, alpha_4 has determinant 2")
def test_criterion_03_isolated_fans():
    def check():
        for k in range(1, 6):
            N = isolated_fan(k)
            rep = fan_properties(N)
            assert len(N.rays) == k + 6 and len(N.maximal_cones) == 2 * k + 8
            assert rep.complete
            assert isinstance(realize_polytopal(N), Polytope)
            assert find_blow_downs(N) == []
            assert rep.unimodular, f"k={k}: multiplicities {sorted(set(rep.multiplicities))}"
    record(3, check)


def test_criterion_04_hardened_3fan():
    def check():
        S = simplex_fan(3)
        H = harden_3fan_detailed(S)
        rep = fan_properties(H.fan)
        assert rep.unimodular and rep.complete and refines(H.fan, S)
        assert find_blow_downs(H.fan) == []
        sigs = {ray_case_signature(H.fan, r) for r in range(len(H.fan.rays))}
        assert sigs <= {"valency>=6", "sum=4a", "sum=2a"}
    record(4, check)


def test_criterion_05_chop_is_blow_up():
    def check():
        rng = random.Random(5)
        for _ in range(100):
            P = random_delzant_polygon(rng).polygon
            N = normal_fan(P)
            for i, v in enumerate(P.vertices):
                eps = min(edge_lengths_at(P, i)) / 4
                assert normal_fan(corner_chop(P, v, eps)) == blow_up(N, vertex_cone(P, v))
    record(5, check)


def test_criterion_06_classification_round_trip():
    def check():
        rng = random.Random(6)
        unchopped = 0
        for _ in range(100):
            sample = random_delzant_polygon(rng)
            c = classify_delzant_polygon(sample.polygon)
            assert agl_congruent(c.replay(), sample.polygon) is not None
            if sample.chops == 0:
                unchopped += 1
                assert c.base_type == sample.base_type
                if c.base_type == "hirzebruch" and sample.params["k"] == 0:
                    # rectangles: the two side lengths may come back in either order
                    assert c.params["k"] == 0
                    assert {c.params["a"], c.params["b"]} == {sample.params["a"], sample.params["b"]}
                else:
                    assert c.params == sample.params
        assert unchopped > 0
    record(6, check)


def test_criterion_07_connectivity():
    def check():
        rng = random.Random(7)
        for _ in range(50):
            P = random_delzant_polygon(rng).polygon
            Q = random_delzant_polygon(rng).polygon
            _check_path(minkowski_path(P, Q), 21)
        for _ in range(10):
            _check_path(minkowski_path(random_delzant_3d(rng), random_delzant_3d(rng)), 21)
    record(7, check)


def test_criterion_08_hausdorff_exactness():
    def check():
        for k in range(1, 6):
            P = build_from_vertices([(0, 0), (1, 0), (k, 1)])
            Q = build_from_vertices([(0, 0), (1, 0), (k - 1, 1), (k, 1)])
            assert hausdorff_distance(P, Q).squared == F(1, k * k + 1)
        rng = random.Random(8)
        for _ in range(50):
            P = random_delzant_polygon(rng).polygon
            Q = random_delzant_polygon(rng).polygon
            exact = hausdorff_distance(P, Q).value
            assert abs(support_uniform_norm_estimate(P, Q, 10 ** 5) - exact) <= 1e-3
    record(8, check)


def test_criterion_09_metric_non_equivalence():
    def check():
        def R(m):
            return build_from_vertices([(0, 0), (m, 0), (0, F(1, m * m)), (m, F(1, m * m))])
        for m in range(1, 7):
            assert symmetric_difference_distance(R(m), R(2 * m)).exact < F(3, m)
            assert hausdorff_distance(R(m), R(2 * m)).squared >= 1
    record(9, check)


def test_criterion_10_desingularization():
    def check():
        rng = random.Random(10)
        for i in range(100):
            n = 2 if i < 70 else 3
            fan = random_complete_fan(rng, n)
            out, trace = desingularize(fan)
            rep = fan_properties(out)
            assert rep.unimodular and rep.complete and refines(out, fan)
            if n == 2:
                for g1, g2 in fan.cones_as_vectors():
                    inside = sorted(r for r in out.rays if _in_cone_2d(r, g1, g2) and r not in (g1, g2))
                    assert inside == sorted(set(oracles.hilbert_basis_2d(g1, g2)) - {g1, g2})
    record(10, check)


def test_criterion_11_lower_bound_and_area():
    def check():
        for name, P in corpus_polytopes():
            assert check_lower_bound(P).ok, name
            if P.dim == 2:
                assert check_polygon_area_bound(P).ok, name
    record(11, check)


def test_criterion_12_secondary_and_stratum():
    def check():
        seen = 0
        for name, P in corpus_polytopes():
            if not is_delzant(P):
                continue
            seen += 1
            N = normal_fan(P)
            b = [P.support_value(r) for r in N.rays]
            assert secondary_cone(N).contains(b), name
            info = stratum_info(N)
            assert (info.dimension, info.lineality) == (len(N.rays), P.dim), name
        assert seen > 0
    record(12, check)


if __name__ == "__main__":
    tests = [f for k, f in sorted(globals().items()) if k.startswith("test_criterion_")]
    for t in tests:
        try:
            t()
        except Exception:
            pass
    print("\n".join(summary_lines()))
