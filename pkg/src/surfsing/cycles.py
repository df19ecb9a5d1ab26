"""Multiplicity vectors of functions on a resolution graph.

For a function h with strict transform meeting E_v in s_v points, the total
transform has zero intersection with every exceptional curve, so the vector
m of vanishing orders satisfies I.m + s = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import DomainError
from .graph_core import PlumbingGraph, intersection_matrix, require_negative_definite, solve_exact


@dataclass(frozen=True)
class CycleVector:
    graph: PlumbingGraph
    values: Mapping[int, int]
    label: str = ""

    def __getitem__(self, v: int) -> int:
        return self.values[v]

    def row(self) -> tuple[int, ...]:
        return tuple(self.values[v] for v in self.graph.ids)

    def __le__(self, other: "CycleVector") -> bool:
        return all(self.values[v] <= other.values[v] for v in self.graph.ids)


def intersection_residual(g: PlumbingGraph, m: Mapping[int, int], label: str) -> dict[int, int]:
    """(I.m + s)_v for every vertex; zero everywhere for a solved vector."""
    s = g.arrow_counts(label)
    out = {}
    for v in g.ids:
        out[v] = g.euler(v) * m[v] + sum(m[w] for w in g.neighbors(v)) + s.get(v, 0)
    return out


def solve_multiplicities(g: PlumbingGraph, label: str) -> CycleVector:
    """Solve I.m = -s exactly and check that m is integral and positive."""
    require_negative_definite(g)
    s = g.arrow_counts(label)
    if not s:
        raise DomainError(f"no arrows labelled {label!r}", kind="no_arrows", label=label)
    mat = intersection_matrix(g)
    sol = solve_exact(mat.entries, [-s.get(v, 0) for v in mat.order])
    if any(x.denominator != 1 for x in sol):
        raise DomainError(f"multiplicities of {label!r} are not integral", kind="non_integral", label=label)
    values = {v: int(x) for v, x in zip(mat.order, sol)}
    if any(x <= 0 for x in values.values()):
        raise DomainError(f"multiplicities of {label!r} are not positive", kind="non_positive", label=label)
    return CycleVector(g, values, label)


def min_combination(vs: Sequence[CycleVector]) -> CycleVector:
    """Componentwise minimum: the multiplicities of a generic linear combination."""
    if not vs:
        raise DomainError("min_combination needs at least one vector", kind="empty_input")
    g = vs[0].graph
    if any(v.graph != g for v in vs[1:]):
        raise DomainError("vectors live on different graphs", kind="graph_mismatch")
    values = {x: min(v.values[x] for v in vs) for x in g.ids}
    return CycleVector(g, values, "+".join(v.label for v in vs))


def multiplicities(g: PlumbingGraph, expr: str) -> CycleVector:
    """Multiplicities of ``label`` or of a generic combination ``a+b+...``."""
    parts = [p.strip() for p in expr.split("+")]
    if len(parts) == 1:
        return solve_multiplicities(g, parts[0])
    out = min_combination([solve_multiplicities(g, p) for p in parts])
    return CycleVector(g, out.values, expr)


def multiplicity_gap(values: Iterable[int]) -> int:
    """Second smallest minus smallest value (0 when the minimum is repeated).

    A positive gap means the minimum is attained by a single generator, so the
    generic member of the linear system still has a base point on the curve.
    The gap is reported as a lower bound on the blow-ups needed there.
    """
    vals = sorted(values)
    if len(vals) < 2:
        raise DomainError("need at least two values", kind="empty_input")
    return vals[1] - vals[0]


def blowup_lower_bound(vs: Sequence[CycleVector], v: int) -> int:
    if len(vs) < 2:
        raise DomainError("need at least two vectors", kind="empty_input")
    if v not in vs[0].graph.vertices:
        raise DomainError(f"vertex {v} not found", kind="vertex_not_found")
    return multiplicity_gap(x.values[v] for x in vs)


def fundamental_cycle(g: PlumbingGraph) -> CycleVector:
    """Laufer's algorithm: start from all ones and raise offending vertices."""
    require_negative_definite(g)
    z = {v: 1 for v in g.ids}
    while True:
        for v in g.ids:
            if g.euler(v) * z[v] + sum(z[w] for w in g.neighbors(v)) > 0:
                z[v] += 1
                break
        else:
            return CycleVector(g, z, "Z")


def format_table(vectors: Sequence[CycleVector]) -> str:
    """One row per function with vertices in id order."""
    if not vectors:
        return ""
    ids = vectors[0].graph.ids
    names = [v.label for v in vectors]
    wl = max(len(n) for n in names) + 1
    width = max(max(len(str(x)) for vec in vectors for x in vec.row()), max(len(str(v)) for v in ids))
    lines = [" " * (wl + 1) + " ".join(str(v).rjust(width) for v in ids)]
    for vec in vectors:
        lines.append(f"{vec.label}:".ljust(wl + 1) + " ".join(str(x).rjust(width) for x in vec.row()))
    return "\n".join(lines) + "\n"


def component_matrix(g: PlumbingGraph, comp: Sequence[int]) -> list[list[int]]:
    """Intersection matrix restricted to the vertices ``comp`` (in that order)."""
    m = intersection_matrix(g)
    idx = {v: i for i, v in enumerate(m.order)}
    return [[m.entries[idx[a]][idx[b]] for b in comp] for a in comp]


def inverse_strictly_negative(g: PlumbingGraph, comp: Sequence[int]) -> bool:
    """All entries of the inverse of the restricted matrix are < 0."""
    mat = component_matrix(g, comp)
    for j in range(len(comp)):
        e = [0] * len(comp)
        e[j] = 1
        if any(x >= 0 for x in solve_exact(mat, e)):
            return False
    return True


def component_gap(
    g: PlumbingGraph, comp: Sequence[int], aux: str, base: str = "z1"
) -> tuple[dict[int, int], dict[int, int]]:
    """(V, B) on a Tjurina component for aux against base.

    V_k = m_k(aux) - m_k(base) and B_k collects the arrow difference at k plus
    the multiplicity differences on adjacent vertices outside the component,
    so that I'.V + B = 0 with I' the restricted matrix.
    """
    ma, mb = multiplicities(g, aux).values, multiplicities(g, base).values
    sa, sb = _arrow_total(g, aux), _arrow_total(g, base)
    cs = set(comp)
    V = {v: ma[v] - mb[v] for v in comp}
    B = {}
    for v in comp:
        outside = sum(ma[w] - mb[w] for w in g.neighbors(v) if w not in cs)
        B[v] = sa.get(v, 0) - sb.get(v, 0) + outside
    return V, B


def _arrow_total(g: PlumbingGraph, expr: str) -> dict[int, int]:
    """Intersection numbers of the strict transform with each curve.

    For a generic combination this is recovered from I.m + s = 0.
    """
    m = multiplicities(g, expr).values
    return {v: -(g.euler(v) * m[v] + sum(m[w] for w in g.neighbors(v))) for v in g.ids}
