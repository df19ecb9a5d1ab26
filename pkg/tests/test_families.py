from fractions import Fraction

import pytest

from surfsing import families as fam
from surfsing.errors import DomainError
from surfsing.graph_core import Z1, intersection_matrix, is_negative_definite
from surfsing.rates import SPECIAL_ANNULAR, THIN_SEIFERT
from surfsing.thickthin import classify_nodes, L_NODE

ALL = fam.worked_examples()


@pytest.mark.parametrize("inst", ALL, ids=[i.name for i in ALL])
def test_pipeline_matches_expectations(inst):
    res = fam.run_pipeline(inst)
    d = res.decomposition
    assert (len(d.thick), len(d.thin), d.conical) == (inst.thick, inst.thin, inst.conical)
    assert fam.observed_rates(res) == inst.rates


@pytest.mark.parametrize("inst", ALL, ids=[i.name for i in ALL])
def test_negative_definite(inst):
    assert is_negative_definite(intersection_matrix(inst.graph))


@pytest.mark.parametrize("n", range(1, 11))
def test_A_rates(n):
    inst = fam.family_A(n)
    if n == 1:
        assert inst.conical
        return
    (rate,) = [q for k, q in inst.rates if k == SPECIAL_ANNULAR]
    assert rate == (Fraction(n // 2 + 1) if n % 2 else Fraction(n + 1, 2))


def test_A_even_centre_weights():
    g = fam.family_A(6).graph
    assert [g.euler(v) for v in (3, 7, 4)] == [-3, -1, -3]
    assert g.arrow_counts("polar") == {7: 1}


@pytest.mark.parametrize("k", range(5, 11))
def test_D_rate(k):
    (rate,) = [q for kind, q in fam.family_D(k).rates if kind == THIN_SEIFERT]
    assert rate == Fraction(k, 2) - 1


def test_E_rates():
    rates = {k: [q for kind, q in fam.family_E(k).rates if kind == THIN_SEIFERT] for k in (6, 7, 8)}
    assert rates == {6: [Fraction(4, 3)], 7: [Fraction(3, 2)], 8: [Fraction(5, 3)]}


@pytest.mark.parametrize("a,b", [(2, 3), (2, 5), (3, 4), (3, 5), (2, 7), (4, 6), (3, 6), (1, 4)])
def test_brieskorn_conical(a, b):
    inst = fam.family_brieskorn(a, b)
    assert set(inst.graph.arrow_counts(Z1)) == {1}
    res = fam.run_pipeline(inst)
    assert res.decomposition.conical


def test_brieskorn_shapes():
    g = fam.family_brieskorn(2, 3).graph
    assert g.euler(1) == -2 and g.valency(1) == 3
    g = fam.family_brieskorn(2, 5).graph
    assert g.euler(1) == -3 and sorted(g.euler(v) for v in g.ids if v != 1) == [-2] * 5
    assert fam.family_brieskorn(2, 4).graph.genus(1) == 1


def test_cusp_lnodes():
    inst = fam.family_cusp([-3, -2, -2, -4, -2])
    assert classify_nodes(inst.graph).of_kind(L_NODE) == (1, 4)
    assert (inst.thick, inst.thin) == (2, 2)


def test_briancon_speder_lnode_change():
    a, b = fam.family_briancon_speder(False), fam.family_briancon_speder(True)
    assert len(classify_nodes(a.graph).of_kind(L_NODE)) == 3
    assert classify_nodes(b.graph).of_kind(L_NODE) == (2,)


@pytest.mark.parametrize(
    "spec",
    [fam.FamilySpec("A", (0,)), fam.FamilySpec("D", (3,)), fam.FamilySpec("E", (9,)),
     fam.FamilySpec("brieskorn", (3, 3)), fam.FamilySpec("hj", (6, 4)), fam.FamilySpec("cusp", (-2, -2)),
     fam.FamilySpec("A", ())],
)
def test_invalid_parameters(spec):
    with pytest.raises(DomainError) as e:
        fam.generate(spec)
    assert e.value.kind == "bad_parameters"


def test_unknown_family():
    with pytest.raises(DomainError):
        fam.FamilySpec("Z")
