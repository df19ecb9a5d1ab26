"""Cross-module invariants on random graphs and on every shipped example."""

import pytest
from hypothesis import given, strategies as st

from surfsing import families as fam
from surfsing.cycles import component_gap, inverse_strictly_negative, multiplicities, solve_multiplicities
from surfsing.graph_core import Z1, blow_up_edge, blow_up_point, intersection_matrix, is_negative_definite
from surfsing.rates import validate_rate_graph
from surfsing.thickthin import decompose, tjurina_components

from conftest import decorated_graphs

ALL = fam.worked_examples()
IDS = [i.name for i in ALL]


@pytest.mark.parametrize("inst", ALL, ids=IDS)
def test_family_blow_ups_stay_definite(inst):
    g = inst.graph
    for e in g.edges:
        assert is_negative_definite(intersection_matrix(blow_up_edge(g, e)))
    for v in g.ids:
        assert is_negative_definite(intersection_matrix(blow_up_point(g, v)))


@pytest.mark.parametrize("inst", ALL, ids=IDS)
def test_tjurina_inverse_strictly_negative(inst):
    sep, _ = decompose(inst.graph)
    for comp in tjurina_components(sep):
        assert inverse_strictly_negative(sep, comp.vertices)


@pytest.mark.parametrize("inst", ALL, ids=IDS)
def test_auxiliary_functions_dominate_z1(inst):
    """V = -I'^{-1} B on each Tjurina component: V > 0 exactly when B != 0."""
    sep, _ = decompose(inst.graph)
    aux = [l for l in sep.labels() if l not in (Z1, "polar")]
    base = multiplicities(sep, Z1).values
    for label in aux:
        m = multiplicities(sep, label).values
        assert all(m[v] >= base[v] for v in sep.ids)
        for comp in tjurina_components(sep):
            V, B = component_gap(sep, comp.vertices, label)
            assert all(b >= 0 for b in B.values())
            if any(B.values()):
                assert all(x > 0 for x in V.values())
            else:
                assert not any(V.values())


@pytest.mark.parametrize("inst", [i for i in ALL if i.rates is not None], ids=[i.name for i in ALL if i.rates is not None])
def test_gamma0_validation_empty(inst):
    res = fam.run_pipeline(inst)
    assert validate_rate_graph(res.gamma0) == []


@given(decorated_graphs(), st.data())
def test_multiplicities_extend_across_blow_ups(g, data):
    m = solve_multiplicities(g, Z1).values
    if g.edges and data.draw(st.booleans()):
        u, w = data.draw(st.sampled_from(g.edges))
        h = blow_up_edge(g, (u, w))
        expect = m[u] + m[w]
    else:
        v = data.draw(st.sampled_from(g.ids))
        h = blow_up_point(g, v)
        expect = m[v]
    m2 = solve_multiplicities(h, Z1).values
    assert all(m2[v] == m[v] for v in g.ids)
    assert m2[max(h.ids)] == expect


@given(decorated_graphs())
def test_random_tjurina_components(g):
    sep, dec = decompose(g)
    for comp in tjurina_components(sep):
        assert inverse_strictly_negative(sep, comp.vertices)
