import pytest
from hypothesis import given

import oracles
from delzant.constructions import hirzebruch_fan, moae_fan
from delzant.desingularize import RefinementTrace, desingularize, hilbert_basis_2d, simplicialize
from delzant.errors import DimensionMismatch, UnsupportedCone
from delzant.exactmath import multiplicity
from delzant.fan import Cone, Fan, fan_properties, realize_polytopal, refines, stellar_subdivision
from delzant.polytope import Polytope, build_from_vertices, normal_fan
from strategies import fans_2d, fans_3d

OCTAHEDRON = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]


def _in_cone_2d(x, g1, g2):
    d = g1[0] * g2[1] - g1[1] * g2[0]
    s = x[0] * g2[1] - x[1] * g2[0]
    t = g1[0] * x[1] - g1[1] * x[0]
    return s * d >= 0 and t * d >= 0


def _max_mults_along(trace: RefinementTrace):
    fan = trace.initial
    out = []
    for gamma, _ in trace.steps:
        fan = stellar_subdivision(fan, gamma)
        if fan.is_simplicial:
            out.append(max(multiplicity(v) for v in fan.cones_as_vectors()))
    return out


# hilbert bases -------------------------------------------------------------------------


def test_hilbert_examples():
    assert hilbert_basis_2d([(1, 0), (0, 1)]) == [(1, 0), (0, 1)]
    assert hilbert_basis_2d([(1, 0), (1, 2)]) == [(1, 0), (1, 1), (1, 2)]
    assert hilbert_basis_2d(Cone.make([(1, 0), (1, 3)])) == [(1, 0), (1, 1), (1, 2), (1, 3)]


def test_hilbert_errors():
    with pytest.raises(DimensionMismatch):
        hilbert_basis_2d([(1, 0, 0), (0, 1, 0)])
    with pytest.raises(UnsupportedCone):
        hilbert_basis_2d([(1, 0), (-1, 0)])


@pytest.mark.parametrize("g1,g2", [((1, 0), (1, 5)), ((2, 1), (1, 3)), ((1, 0), (-3, 7)), ((3, -2), (-1, 4)), ((5, 2), (2, 5))])
def test_hilbert_against_brute_force(g1, g2):
    got = hilbert_basis_2d([g1, g2])
    assert sorted(got) == oracles.hilbert_basis_2d(g1, g2)
    assert len(got) - 2 <= multiplicity([g1, g2])


# simplicialization ----------------------------------------------------------------------


def test_simplicialize_examples():
    H = hirzebruch_fan(2)
    out, trace = simplicialize(H)
    assert out == H and trace.steps == ()
    octa = normal_fan(build_from_vertices(OCTAHEDRON))
    assert not octa.is_simplicial
    out, trace = simplicialize(octa)
    rep = fan_properties(out)
    assert rep.simplicial and rep.complete and refines(out, octa)
    assert trace.replay() == out


@given(fans_2d)
def test_2d_fans_already_simplicial(fan):
    out, trace = simplicialize(fan)
    assert out == fan and not trace.steps


# desingularization ----------------------------------------------------------------------


def test_desingularize_examples():
    H = hirzebruch_fan(3)
    out, trace = desingularize(H)
    assert out == H and not trace.steps
    fan = Fan.from_cones(2, [[(1, 0), (1, 2)], [(1, 2), (0, 1)], [(0, 1), (-1, 0)], [(-1, 0), (0, -1)], [(0, -1), (1, 0)]])
    out, trace = desingularize(fan)
    assert trace.inserted == [(1, 1)]
    assert fan_properties(out).unimodular


def test_desingularize_moae():
    base = moae_fan()
    out, trace = desingularize(base)
    assert trace.inserted == [(1, 1, 1)]
    assert out == moae_fan(unimodular=True)
    assert len(out.rays) == 7 and len(out.maximal_cones) == 10


def test_desingularize_octahedron_fan():
    octa = normal_fan(build_from_vertices(OCTAHEDRON))
    out, trace = desingularize(octa)
    rep = fan_properties(out)
    assert rep.unimodular and rep.complete and refines(out, octa)
    assert trace.replay() == out
    assert isinstance(realize_polytopal(out), Polytope)


def test_trace_json_shape():
    _, trace = desingularize(moae_fan())
    js = trace.to_json()
    assert js == [{"gamma": [1, 1, 1], "cone": js[0]["cone"]}]
    assert len(js[0]["cone"]) == 3 and all(isinstance(i, int) for i in js[0]["cone"])


@given(fans_2d)
def test_desingularize_2d(fan):
    out, trace = desingularize(fan)
    rep = fan_properties(out)
    assert rep.unimodular and rep.complete and refines(out, fan)
    assert trace.replay() == out
    mults = _max_mults_along(trace)
    assert all(a >= b for a, b in zip(mults, mults[1:]))
    # inserted rays in each input cone are exactly the interior Hilbert basis elements
    for g1, g2 in fan.cones_as_vectors():
        inside = sorted(r for r in out.rays if _in_cone_2d(r, g1, g2) and r not in (g1, g2))
        expected = sorted(set(oracles.hilbert_basis_2d(g1, g2)) - {g1, g2})
        assert inside == expected


@given(fans_3d)
def test_desingularize_3d(fan):
    out, trace = desingularize(fan)
    rep = fan_properties(out)
    assert rep.unimodular and rep.complete and refines(out, fan)
    assert trace.replay() == out
    mults = _max_mults_along(trace)
    assert all(a >= b for a, b in zip(mults, mults[1:]))


@given(fans_3d)
def test_polytopal_input_gives_polytopal_output(fan):
    out, _ = desingularize(fan)
    P = realize_polytopal(out)
    assert isinstance(P, Polytope) and normal_fan(P) == out
