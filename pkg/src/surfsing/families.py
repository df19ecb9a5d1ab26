"""Decorated resolution graphs of standard example families.

Each generator returns a :class:`FamilyInstance`: the graph with its ``z1``
arrows (plus auxiliary coordinate and ``polar`` arrows where known), the
expected thick/thin counts, and the expected rate-decorated pieces together
with where each rate comes from.

Rates come from two sources.  Hironaka numbers m(aux)/m(z1) are used where the
discriminant has a single characteristic exponent through that node.  Rates
of polar strings are read off the carrousel of the discriminant branches
lifted through z^2 = f, reduced with the rewrite rules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

from . import carrousel as cr
from .cycles import fundamental_cycle
from .errors import DomainError
from .fastloop import hj_bamboo, hj_expansion
from .graph_core import POLAR, Z1, Arrow, PlumbingGraph, intersection_matrix, is_negative_definite, make_graph
from .rates import SPECIAL_ANNULAR, THICK, THIN_SEIFERT, RateGraph, build_rate_graph, hironaka_number
from .thickthin import ThickThinDecomposition, decompose

FAMILIES = ("A", "D", "E", "brieskorn", "hj", "cusp", "briancon-speder", "superisolated")


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: tuple = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}", kind="bad_parameters")
        object.__setattr__(self, "params", tuple(self.params))


@dataclass(frozen=True)
class Hironaka:
    """Rate m_v(aux)/m_v(base) read at the listed vertices."""

    aux: str
    base: str = Z1


@dataclass(frozen=True)
class CarrouselRate:
    """Rate of the unique reduced piece of ``kind`` for these branches."""

    branches: tuple[cr.PuiseuxBranch, ...]
    kind: str
    transverse: tuple[cr.TransverseBranch, ...] = ()

    def rate(self) -> Fraction:
        g = cr.minimal_graph(cr.BranchData.double_cover(self.branches, self.transverse))
        qs = {q for k, q in cr.thin_summary(g) if k == self.kind}
        if len(qs) != 1:
            raise DomainError(f"carrousel gives {len(qs)} rates of kind {self.kind}", kind="rate_unavailable")
        return qs.pop()


@dataclass(frozen=True)
class FamilyInstance:
    name: str
    graph: PlumbingGraph
    thick: int
    thin: int
    conical: bool
    rates: tuple[tuple[str, Fraction], ...] | None
    rate_sources: Mapping[int, Hironaka | CarrouselRate] = field(default_factory=dict)

    def expected(self) -> dict:
        out = {"family": self.name, "thick": self.thick, "thin": self.thin, "conical": self.conical}
        if self.rates is not None:
            out["rates"] = [[k, f"{q.numerator}/{q.denominator}"] for k, q in self.rates]
        return out


@dataclass(frozen=True)
class PipelineResult:
    graph: PlumbingGraph
    decomposition: ThickThinDecomposition
    rates: dict[int, Fraction]
    gamma0: RateGraph | None


def _sorted_rates(items) -> tuple:
    order = {THICK: 0, THIN_SEIFERT: 1, SPECIAL_ANNULAR: 2}
    return tuple(sorted(((k, Fraction(q)) for k, q in items), key=lambda x: (order[x[0]], x[1])))


# -- ADE ----------------------------------------------------------------------


def family_A(n: int) -> FamilyInstance:
    """A_n: z1 at both ends; a polar string in the middle for n >= 2.

    For even n the middle edge is blown up, leaving -3, -1, -3 with the polar
    on the -1 curve.
    """
    if n < 1:
        raise DomainError("A_n needs n >= 1", kind="bad_parameters")
    if n == 1:
        g = make_graph({1: -2}, (), [(Z1, 1, 2)])
        return FamilyInstance("A1", g, 1, 0, True, _sorted_rates([(THICK, 1)]))
    if n % 2:
        m = n // 2
        verts = {v: -2 for v in range(1, n + 1)}
        edges = [(v, v + 1) for v in range(1, n)]
        arrows = [(Z1, 1), (Z1, n), (POLAR, m + 1)]
        bs = (cr.branch("d1", (m + 1, "i")), cr.branch("d2", (m + 1, "j")))
        rate = Fraction(m + 1)
        mid = m + 1
    else:
        m = n // 2
        verts = {v: -2 for v in range(1, n + 1)}
        verts[m] = verts[m + 1] = -3
        mid = n + 1
        verts[mid] = -1
        edges = [(v, v + 1) for v in range(1, n) if v != m] + [(m, mid), (mid, m + 1)]
        arrows = [(Z1, 1), (Z1, n), (POLAR, mid)]
        rate = Fraction(2 * m + 1, 2)
        bs = (cr.branch("d", (rate, "a")),)
    g = make_graph(verts, edges, arrows)
    return FamilyInstance(
        f"A{n}", g, 2, 1, False,
        _sorted_rates([(THICK, 1), (THICK, 1), (SPECIAL_ANNULAR, rate)]),
        {mid: CarrouselRate(bs, "special-annular")},
    )


def family_D(k: int) -> FamilyInstance:
    """D_k: centre 1 with leaves 2, 3 and the chain 4..k; z1 next to the end."""
    if k < 4:
        raise DomainError("D_k needs k >= 4", kind="bad_parameters")
    verts = {v: -2 for v in range(1, k + 1)}
    edges = [(1, 2), (1, 3), (1, 4)] + [(v, v + 1) for v in range(4, k)]
    lnode = 1 if k == 4 else k - 1
    arrows = [(Z1, lnode)]
    arrows += [("y", 2), ("y", 3)] if k % 2 else [("y", 1)]
    g = make_graph(verts, edges, arrows)
    if k == 4:
        return FamilyInstance("D4", g, 1, 0, True, _sorted_rates([(THICK, 1)]))
    rate = Fraction(k, 2) - 1
    return FamilyInstance(f"D{k}", g, 1, 1, False, _sorted_rates([(THICK, 1), (THIN_SEIFERT, rate)]),
                          {1: Hironaka("y")})


def family_E(k: int) -> FamilyInstance:
    """E6, E7, E8 with centre 1; the y arrows make m(y)/m(z1) the rate."""
    if k == 6:
        edges = [(1, 2), (1, 3), (3, 4), (1, 5), (5, 6)]
        arrows = [(Z1, 2), ("y", 4), ("y", 6)]
        rate = Fraction(4, 3)
    elif k == 7:
        edges = [(1, 2), (1, 3), (3, 4), (1, 5), (5, 6), (6, 7)]
        arrows = [(Z1, 4), ("y", 6)]
        rate = Fraction(3, 2)
    elif k == 8:
        return _e8(rate_only=True)
    else:
        raise DomainError("E_k needs k in {6, 7, 8}", kind="bad_parameters")
    g = make_graph({v: -2 for v in range(1, k + 1)}, edges, arrows)
    return FamilyInstance(f"E{k}", g, 1, 1, False, _sorted_rates([(THICK, 1), (THIN_SEIFERT, rate)]),
                          {1: Hironaka("y")})


E8_EDGES = ((1, 2), (2, 3), (3, 4), (4, 5), (1, 6), (6, 7), (1, 8))


def _e8(rate_only: bool) -> FamilyInstance:
    arrows = [(Z1, 5), ("y", 7)] if rate_only else [(Z1, 5), ("x", 8), ("y", 7), ("z", 5)]
    g = make_graph({v: -2 for v in range(1, 9)}, E8_EDGES, arrows)
    return FamilyInstance("E8", g, 1, 1, False,
                          _sorted_rates([(THICK, 1), (THIN_SEIFERT, Fraction(5, 3))]), {1: Hironaka("y")})


def e8_coordinates() -> PlumbingGraph:
    """E8 of x^2 + y^3 + z^5 with arrows for x, y, z and the partials.

    Vertex v_j is id j: centre 1, arms 2-3-4-5, 6-7 and 8.  The partials are
    f_x = 2x, f_y = 3y^2 and f_z = 5z^4, so their arrows are x, 2y and 4z.
    """
    arrows = [("x", 8), ("y", 7), ("z", 5), ("fx", 8), ("fy", 7, 2), ("fz", 5, 4), (Z1, 5), (POLAR, 8)]
    return make_graph({v: -2 for v in range(1, 9)}, E8_EDGES, arrows)


# -- Brieskorn, lens spaces, cusps --------------------------------------------


def family_brieskorn(a: int, b: int) -> FamilyInstance:
    """x^a + y^b + z^b with 1 <= a < b: a star whose centre is the only node.

    With d = gcd(a, b) and alpha = a/d there are b arms of type
    alpha/beta (none when alpha = 1), where beta is the least positive
    integer with alpha | d + b beta; the centre has genus (b-2)(d-1)/2 and
    Euler weight -d(d + b beta)/a (or -a when alpha = 1).
    """
    if not 1 <= a < b:
        raise DomainError("brieskorn needs 1 <= a < b", kind="bad_parameters")
    d = gcd(a, b)
    alpha = a // d
    genus = (b - 2) * (d - 1) // 2
    if a == 1:
        g = make_graph({1: -1}, (), [(Z1, 1)])
        return FamilyInstance(f"brieskorn({a},{b})", g, 1, 0, True, _sorted_rates([(THICK, 1)]))
    if alpha == 1:
        verts = {1: (-a, genus)}
        edges = []
    else:
        beta = next(x for x in range(1, alpha) if (d + b * x) % alpha == 0 and gcd(alpha, x) == 1)
        verts = {1: (-d * (d + b * beta) // a, genus)}
        edges = []
        chain = hj_expansion(alpha, beta)
        nxt = 2
        for _ in range(b):
            prev = 1
            for e in chain:
                verts[nxt] = (-e, 0)
                edges.append((prev, nxt))
                prev, nxt = nxt, nxt + 1
    bare = make_graph(verts, edges)
    z = fundamental_cycle(bare).values
    mat = intersection_matrix(bare)
    idx = {v: i for i, v in enumerate(mat.order)}
    arrows = []
    for v in bare.ids:
        s = -sum(mat.entries[idx[v]][idx[w]] * z[w] for w in bare.ids)
        if s:
            arrows.append(Arrow(Z1, v, s))
    if any(a.at != 1 for a in arrows):
        raise AssertionError("generic linear form meets an arm")
    g = bare.with_arrows(arrows)
    return FamilyInstance(f"brieskorn({a},{b})", g, 1, 0, True, _sorted_rates([(THICK, 1)]))


def family_hj(p: int, q: int) -> FamilyInstance:
    g = hj_bamboo(p, q)
    nl = len(g.arrow_counts(Z1))
    return FamilyInstance(f"hj({p},{q})", g, nl, nl - 1, nl == 1, None)


def family_cusp(eulers: Sequence[int]) -> FamilyInstance:
    """A cycle of rational curves; z1 arrows where the weight is <= -3."""
    es = [int(e) for e in eulers]
    if len(es) < 2:
        raise DomainError("cusp cycle needs at least two curves", kind="bad_parameters")
    if any(e > -2 for e in es) or not any(e <= -3 for e in es):
        raise DomainError("cusp entries must be <= -2 with one <= -3", kind="bad_parameters")
    n = len(es)
    verts = {i + 1: e for i, e in enumerate(es)}
    edges = [(i, i + 1) for i in range(1, n)] + [(n, 1)]
    arrows = [(Z1, i + 1, -e - 2) for i, e in enumerate(es) if e <= -3]
    g = make_graph(verts, edges, arrows)
    nl = len(arrows)
    return FamilyInstance(f"cusp({','.join(map(str, es))})", g, nl, nl, False, None)


# -- worked examples ----------------------------------------------------------


def family_briancon_speder(t_zero: bool = False) -> FamilyInstance:
    """Resolved hyperplane systems for x^5 + z^15 + y^7 z + t x y^6.

    t != 0: the genus 8 curve 1 meets the -2 curve 2 and two -1 curves 3, 4,
    all three L-curves.  t = 0: the chain 1 - 2 - 3 - 4 with a single
    L-curve 2 of weight -1.  The ``y`` arrows make m(y)/m(z1) = 2 at 1.
    """
    if t_zero:
        g = make_graph({1: (-5, 8), 2: -1, 3: -2, 4: -3}, [(1, 2), (2, 3), (3, 4)],
                       [(Z1, 2), ("y", 1, 5)])
        thick = 1
    else:
        g = make_graph({1: (-5, 8), 2: -2, 3: -1, 4: -1}, [(1, 2), (1, 3), (1, 4)],
                       [(Z1, 2), (Z1, 3), (Z1, 4), ("y", 1, 5)])
        thick = 3
    rates = [(THICK, 1)] * thick + [(THIN_SEIFERT, 2)]
    name = "briancon-speder(t=0)" if t_zero else "briancon-speder(t!=0)"
    return FamilyInstance(name, g, thick, 1, False, _sorted_rates(rates), {1: Hironaka("y")})


SUPERISOLATED_BRANCH = (cr.branch("d", ("3/2", "a")),)


def family_superisolated() -> FamilyInstance:
    """(z x^2 + y^3)(x^3 + z y^2) + z^7.

    L-curves 1 and 2 (weight -23, three z1 arrows each); the string
    3 - 4 - 5 - 6 - 7 with 4 meeting 1 and 6 meeting 2; five -1 curves
    8..12 each meeting both L-curves.  Polars meet 5 and 8..12.
    """
    verts = {1: -23, 2: -23, 3: -2, 4: -1, 5: -5, 6: -1, 7: -2}
    verts.update({v: -1 for v in range(8, 13)})
    edges = [(3, 4), (4, 5), (5, 6), (6, 7), (1, 4), (2, 6)]
    edges += [(s, l) for s in range(8, 13) for l in (1, 2)]
    arrows = [(Z1, 1, 3), (Z1, 2, 3), ("x", 3), ("x", 2), ("y", 7), ("y", 1), (POLAR, 5)]
    arrows += [(POLAR, s) for s in range(8, 13)]
    g = make_graph(verts, edges, arrows)
    rates = [(THICK, 1)] * 2 + [(THIN_SEIFERT, Fraction(6, 5))] * 2 + [(SPECIAL_ANNULAR, Fraction(5, 4))]
    rates += [(SPECIAL_ANNULAR, Fraction(3, 2))] * 5
    sources: dict = {4: Hironaka("x+y"), 5: Hironaka("x+y"), 6: Hironaka("x+y")}
    sources.update({s: CarrouselRate(SUPERISOLATED_BRANCH, "special-annular") for s in range(8, 13)})
    return FamilyInstance("superisolated", g, 2, 6, False, _sorted_rates(rates), sources)


def superisolated_unseparated() -> PlumbingGraph:
    """The same singularity before separating L-curves: five parallel edges."""
    verts = {1: -18, 2: -18, 3: -2, 4: -1, 5: -5, 6: -1, 7: -2}
    edges = [(3, 4), (4, 5), (5, 6), (6, 7), (1, 4), (2, 6)] + [(1, 2)] * 5
    return make_graph(verts, edges, [(Z1, 1, 3), (Z1, 2, 3)])


# -- dispatch -----------------------------------------------------------------


def generate(spec: FamilySpec) -> FamilyInstance:
    f, p = spec.family, spec.params
    try:
        if f == "A":
            (n,) = p
            return family_A(int(n))
        if f == "D":
            (k,) = p
            return family_D(int(k))
        if f == "E":
            (k,) = p
            return family_E(int(k))
        if f == "brieskorn":
            a, b = p
            return family_brieskorn(int(a), int(b))
        if f == "hj":
            pp, q = p
            return family_hj(int(pp), int(q))
        if f == "cusp":
            return family_cusp([int(x) for x in p])
        if f == "briancon-speder":
            return family_briancon_speder(bool(p and p[0]))
        return family_superisolated()
    except (TypeError, ValueError) as e:
        if isinstance(e, DomainError):
            raise
        raise DomainError(f"bad parameters for {f}: {list(p)}", kind="bad_parameters") from None


def table_sweep() -> list[FamilyInstance]:
    """Simple singularities A1..A10, D4..D10, E6..E8."""
    out = [family_A(n) for n in range(1, 11)]
    out += [family_D(k) for k in range(4, 11)]
    out += [family_E(k) for k in (6, 7, 8)]
    return out


def worked_examples() -> list[FamilyInstance]:
    out = table_sweep()
    out += [family_briancon_speder(False), family_briancon_speder(True), family_superisolated()]
    out += [family_brieskorn(2, 3), family_brieskorn(2, 5), family_brieskorn(3, 4), family_brieskorn(2, 4)]
    out += [family_hj(7, 3), family_hj(5, 2), family_cusp([-3, -2, -4]), family_cusp([-3, -3])]
    return out


def resolve_rates(inst: FamilyInstance) -> dict[int, Fraction]:
    out = {}
    cache: dict = {}
    for v, src in sorted(inst.rate_sources.items()):
        if isinstance(src, Hironaka):
            out[v] = hironaka_number(inst.graph, v, src.base, src.aux)
        else:
            if src not in cache:
                cache[src] = src.rate()
            out[v] = cache[src]
    return out


def run_pipeline(inst: FamilyInstance) -> PipelineResult:
    """separate -> decompose -> rates -> classification graph."""
    if not is_negative_definite(intersection_matrix(inst.graph)):
        raise DomainError(f"{inst.name} is not negative definite", kind="not_negative_definite")
    sep, dec = decompose(inst.graph)
    if inst.rates is None:
        return PipelineResult(sep, dec, {}, None)
    rates = resolve_rates(inst)
    return PipelineResult(sep, dec, rates, build_rate_graph(sep, dec, rates))


def observed_rates(res: PipelineResult) -> tuple | None:
    if res.gamma0 is None:
        return None
    return _sorted_rates((p.kind, p.q) for p in res.gamma0.pieces)
