from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings

from surfsing import carrousel as cr
from surfsing.errors import DomainError, GraphParseError

from strategies_carrousel import branch_data, branch_sets, irreducible_branches

F = Fraction


def example_tree():
    bs = [cr.branch("b1", ("4/3", "a"), ("13/6", "b")), cr.branch("b2", ("7/4", "c"))]
    return cr.build_carrousel(cr.truncate_branches(bs))


def _run(bs, trans=()):
    return cr.thin_summary(cr.minimal_graph(cr.BranchData.double_cover(bs, trans)))


def test_characteristic_exponents():
    with pytest.raises(DomainError):
        cr.branch("b", ("3/2", "a"), ("9/4", "d"), ("17/8", "e"))
    b = cr.branch("b", ("3/2", "a"), ("7/4", "c"), ("2", "u"), ("9/4", "d"), ("19/8", "e"))
    assert cr.characteristic_exponents(b) == [F(3, 2), F(7, 4), F(19, 8)]


def test_truncation_single_branch():
    b = cr.branch("b", ("3/2", "a"), ("7/4", "c"), ("2", "u"), ("9/4", "d"))
    (t,) = cr.truncate_branches([b])
    assert t.exponents == (F(3, 2), F(7, 4))


def test_truncation_keeps_separating_term():
    b1 = cr.branch("b1", ("2", "a"), ("3", "b"))
    b2 = cr.branch("b2", ("2", "a"), ("3", "c"))
    t1, t2 = cr.truncate_branches([b1, b2])
    assert t1.exponents == t2.exponents == (F(2), F(3))
    t1, t2 = cr.truncate_branches([cr.branch("b1", ("2", "a"), ("5", "b")), cr.branch("b2", ("3", "c"))])
    # c x^3 sits in the central disc of a x^2: it separates with no term there
    assert t1.exponents == (F(2),) and t2.exponents == ()


def test_example_tree_shape():
    t = example_tree()
    assert Counter(t.b_exponents()) == Counter([F(4, 3), F(13, 6), F(7, 4)])
    leaves = [p for p in t.pieces if p.kind == "D"]
    assert len(leaves) == 4
    assert sorted(p.contains for p in leaves if p.contains) == [("b1",), ("b2",)]
    b = {p.q: p for p in t.of_kind("B")}
    assert t.pieces[b[F(13, 6)].parent].kind == "A"
    kids = {q: sorted(c.kind + str(c.q) for c in t.children(p.id)) for q, p in b.items()}
    assert kids[F(13, 6)] == ["D13/6", "D13/6"]
    assert kids[F(7, 4)] == ["D7/4", "D7/4"]
    assert kids[F(4, 3)] == ["A4/3", "A4/3"]
    assert t.root.kind == "A" and (t.root.q, t.root.q_high) == (1, F(4, 3))


def test_example_tree_render():
    text = example_tree().render()
    assert text.splitlines()[0] == "A(1,4/3)"
    assert text.count("⊗") == 2


@pytest.mark.parametrize(
    "terms,counts",
    [
        ((("4/3", "a"),), [5]),
        ((("4/3", "a"), ("13/6", "b")), [5, 4]),
        ((("7/4", "a"),), [6]),
    ],
)
def test_single_branch_boundary_counts(terms, counts):
    t = cr.build_carrousel([cr.branch("b", *terms)])
    assert [p.boundary for p in sorted(t.of_kind("B"), key=lambda p: p.q)] == counts


def test_boundary_unresolved_for_several_tokens():
    t = cr.build_carrousel([cr.branch("b1", ("3/2", "a")), cr.branch("b2", ("3/2", "b"))])
    (b,) = t.of_kind("B")
    assert b.boundary is None and len(b.tokens) == 2


def test_contact_order():
    a = cr.principal([cr.Term(F(3, 2), "a")])
    b = cr.conjugates([cr.Term(F(3, 2), "a")])[1]
    assert cr.contact_order(a, b) == F(3, 2)
    assert cr.contact_order(a, a) is cr.INF


@pytest.mark.parametrize(
    "bs,trans,expected",
    [
        ([cr.branch("b", ("3/2", "a"))], (), [("special-annular", F(3, 2))]),
        ([cr.branch("b", ("4/3", "a"))], (), [("T", F(4, 3))]),
        ([cr.branch("b", ("5/3", "a"))], (), [("T", F(5, 3))]),
        ([cr.branch("e"), cr.branch("b", ("3/2", "a"))], (), [("T", F(3, 2))]),
        ([cr.branch("b", ("3/2", "a"))], (cr.TransverseBranch("t"),), [("T", F(3, 2))]),
        ([cr.branch("b1", ("2", "i")), cr.branch("b2", ("2", "j"))], (cr.TransverseBranch("t"),), [("T", F(2))]),
        ([cr.branch("b1", ("3", "i")), cr.branch("b2", ("3", "j"))], (), [("special-annular", F(3))]),
    ],
)
def test_simple_discriminants(bs, trans, expected):
    assert _run(bs, trans) == expected


def test_two_characteristic_exponents():
    assert _run([cr.branch("f", ("3/2", "a"), ("7/4", "c"))]) == [
        ("T", F(3, 2)), ("T", F(3, 2)), ("special-annular", F(7, 4))]
    assert _run([cr.branch("f", ("3/2", "a"), ("11/6", "c"))]) == [("T", F(3, 2)), ("T", F(11, 6))]


def test_unbranched_lift_is_two_copies():
    t = cr.build_carrousel([cr.branch("b", ("3/2", "a"))])
    g = cr.lift_double_cover(t, [])
    assert len(g.vertices) == 2 * len(t.pieces)


def test_single_point_disc_lifts_to_disc():
    t = cr.build_carrousel([cr.branch("b", ("2", "a"))])
    g = cr.lift_double_cover(t)
    leaf = t.leaf_of("b")
    (v,) = [x for x in g.vertices.values() if x.source == leaf.id]
    assert g.is_disc(v.id)


def test_bad_marking():
    t = example_tree()
    with pytest.raises(DomainError) as e:
        cr.lift_double_cover(t, [t.root.id])
    assert e.value.kind == "bad_marking"


def _dv(vid, kind, q, q_high=None, root=False, n=1, chi=0, b=0, phi=True):
    return cr.DVertex(vid, kind, F(q), None if q_high is None else F(q_high), root, n, chi, b, phi)


def test_rule_five_collapses_to_root_disc():
    g = cr.DecompGraph({0: _dv(0, "A", 1, 2, root=True), 1: _dv(1, "B", 2, n=1, chi=1, b=1)}, {0: (0, 1, 1)})
    r = cr.reduce(g)
    (v,) = r.vertices.values()
    assert v.root and v.kind == "B" and v.q == 1 and r.is_disc(v.id)


def test_rule_two_merges_annuli():
    g = cr.DecompGraph(
        {0: _dv(0, "A", 1, 2, root=True), 1: _dv(1, "A", 2, 3), 2: _dv(2, "B", 3, n=1, chi=-1, b=3)},
        {0: (0, 1, 1), 1: (1, 2, 1)},
    )
    r = cr.reduce(g)
    a = r.vertices[0]
    assert (a.q, a.q_high) == (1, 3) and len(r.vertices) == 2


def test_rule_one_and_special():
    g = cr.DecompGraph(
        {0: _dv(0, "A", 1, 2, root=True), 1: _dv(1, "A", 1, 2, root=True),
         2: _dv(2, "B", 2, n=1, chi=0, b=2, phi=False)},
        {0: (0, 2, 1), 1: (1, 2, 1)},
    )
    r = cr.reduce(g)
    assert r.vertices[2].special and r.vertices[2].phi_id
    assert cr.thin_summary(r) == [("special-annular", F(2))]


def test_reduce_trace_strictly_decreases():
    t = example_tree()
    tr = []
    cr.reduce(cr.lift_double_cover(t), trace=tr)
    ms = [m for _, m in tr]
    assert ms == sorted(ms, reverse=True) and len(set(ms)) == len(ms)


def test_empty_branch_set_root_only():
    g = cr.minimal_graph(cr.BranchData((), (), frozenset()))
    assert len(g.vertices) == 1 and g.vertices[0].root


def test_parse_branches():
    text = "branch b1\n  term exp=4/3 coeff=a\n  term exp=13/6 coeff=b\nbranch b2\n  term exp=7/4 coeff=c\ntransverse t mult=2\nbranch-point b1\n"
    d = cr.parse_branches(text)
    assert [b.name for b in d.branches] == ["b1", "b2"]
    assert d.branches[0].exponents == (F(4, 3), F(13, 6))
    assert d.transverse == (cr.TransverseBranch("t", 2),)
    assert d.marked == {"b1"}
    assert cr.parse_branches(cr.serialize_branches(d)) == d


@pytest.mark.parametrize(
    "text,line",
    [
        ("term exp=3/2 coeff=a\n", 1),
        ("branch b\nterm exp=3/2 coeff=a\n", 2),
        ("branch b\n  term exp=x coeff=a\n", 2),
        ("branch b\n  term coeff=a\n", 2),
        ("branch b\nbranch-point c\n", 2),
        ("twig b\n", 1),
    ],
)
def test_parse_branch_errors(text, line):
    with pytest.raises(GraphParseError) as e:
        cr.parse_branches(text)
    assert e.value.line == line


def test_invalid_branches():
    with pytest.raises(DomainError):
        cr.branch("b", ("1", "a"))
    with pytest.raises(DomainError):
        cr.branch("b", ("2", "0"))
    with pytest.raises(DomainError) as e:
        cr.truncate_branches([cr.branch("a", ("2", "x")), cr.branch("b", ("2", "x"))])
    assert e.value.kind == "duplicate_branch"


# -- properties ---------------------------------------------------------------


@given(branch_sets())
def test_b_path_matches_truncated_exponents(bs):
    tb = cr.truncate_branches(bs)
    t = cr.build_carrousel(tb)
    for b in tb:
        assert cr.branch_b_path(t, b.name) == list(b.exponents)


@given(branch_data())
def test_lift_euler_characteristic(d):
    tb = cr.truncate_branches(d.branches)
    t = cr.build_carrousel(tb, d.transverse)
    pieces = [t.leaf_of(b.name).id for b in tb if b.name in d.marked]
    trans = [x.mult for x in d.transverse if x.name in d.marked]
    g = cr.lift_double_cover(t, pieces, trans)
    base = sum(p.copies * (1 - len(p.holes)) for p in t.pieces)
    points = sum(cr.denominators_lcm(b.exponents) for b in tb if b.name in d.marked)
    assert sum(v.chi for v in g.vertices.values()) == 2 * base - points


@settings(max_examples=150)
@given(branch_data())
def test_reduce_terminates_and_is_confluent(d):
    tb = cr.truncate_branches(d.branches)
    t = cr.build_carrousel(tb, d.transverse)
    pieces = [t.leaf_of(b.name).id for b in tb if b.name in d.marked]
    trans = [x.mult for x in d.transverse if x.name in d.marked]
    g = cr.lift_double_cover(t, pieces, trans)
    tr = []
    a = cr.reduce(g, trace=tr)
    ms = [g.measure()] + [m for _, m in tr]
    assert all(x > y for x, y in zip(ms, ms[1:]))
    b = cr.reduce(g, order="reverse")
    assert cr.isomorphic(a, b)
    assert cr.is_reduced(a)
    kinds = {a.piece_kind(v) for v in a.vertices}
    assert "D" not in kinds and "annular" not in kinds


@given(irreducible_branches())
def test_irreducible_dichotomy(data):
    b, pairs = data
    summary = _run([b])
    last, r = pairs[-1]
    assert sorted({q for _, q in summary}) == [e for e, _ in pairs]
    assert all(k == "T" for k, q in summary if q != last)
    assert {k for k, q in summary if q == last} == ({"special-annular"} if r == 2 else {"T"})
