"""Node classification and the thick-thin decomposition of a resolution graph.

L-curves are the vertices carrying ``z1`` arrows.  A vertex is a node when it
has valency >= 3 (edges only), positive genus, or is an L-curve.  Removing the
L-nodes leaves the Tjurina components; those that are not bamboos give the
thin pieces, while each L-node together with its bamboos gives a thick piece.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import DomainError
from .graph_core import POLAR, Z1, PlumbingGraph, blow_up_edge

L_NODE = "L-node"
T_NODE = "T-node"
A_CANDIDATE = "A-candidate"
ORDINARY = "ordinary"


@dataclass(frozen=True)
class NodeClassification:
    kinds: Mapping[int, str]
    is_node: Mapping[int, bool]
    is_L_curve: Mapping[int, bool]

    def of_kind(self, kind: str) -> tuple[int, ...]:
        return tuple(v for v, k in self.kinds.items() if k == kind)

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(v for v, b in self.is_node.items() if b)


@dataclass(frozen=True)
class TjurinaComponent:
    vertices: tuple[int, ...]
    is_bamboo: bool


@dataclass(frozen=True)
class ThickPiece:
    lnode: int
    bamboos: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ThickThinDecomposition:
    thick: tuple[ThickPiece, ...]
    thin: tuple[TjurinaComponent, ...]
    conical: bool

    def to_json(self) -> dict:
        return {
            "thick": [{"lnode": p.lnode, "bamboos": [list(b) for b in p.bamboos]} for p in self.thick],
            "thin": [list(c.vertices) for c in self.thin],
            "conical": self.conical,
        }


def _require_z1(g: PlumbingGraph) -> None:
    if not g.arrow_counts(Z1):
        raise DomainError("graph carries no z1 arrows", kind="no_z1_arrows")


def is_L_curve(g: PlumbingGraph, v: int) -> bool:
    return any(a.label == Z1 for a in g.arrows_at(v))


def is_node(g: PlumbingGraph, v: int) -> bool:
    return g.valency(v) >= 3 or g.genus(v) > 0 or is_L_curve(g, v)


def classify_nodes(g: PlumbingGraph) -> NodeClassification:
    _require_z1(g)
    kinds, node, lc = {}, {}, {}
    for v in g.ids:
        lc[v] = is_L_curve(g, v)
        node[v] = is_node(g, v)
        if node[v]:
            kinds[v] = L_NODE if lc[v] else T_NODE
        elif any(a.label == POLAR for a in g.arrows_at(v)):
            kinds[v] = A_CANDIDATE
        else:
            kinds[v] = ORDINARY
    return NodeClassification(kinds, node, lc)


def adjacent_L_edges(g: PlumbingGraph) -> list[tuple[int, int]]:
    return [e for e in g.edges if is_L_curve(g, e[0]) and is_L_curve(g, e[1])]


def separate_L_nodes(g: PlumbingGraph) -> PlumbingGraph:
    """Blow up every intersection point between two L-curves."""
    while True:
        bad = adjacent_L_edges(g)
        if not bad:
            return g
        g = blow_up_edge(g, bad[0])


def tjurina_components(g: PlumbingGraph) -> list[TjurinaComponent]:
    _require_z1(g)
    if adjacent_L_edges(g):
        raise DomainError("two L-curves intersect; separate them first", kind="adjacent_L_curves")
    lnodes = {v for v in g.ids if is_L_curve(g, v)}
    seen: set[int] = set()
    out = []
    for v in g.ids:
        if v in lnodes or v in seen:
            continue
        comp = []
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for w in g.neighbors(x):
                if w not in lnodes and w not in seen:
                    seen.add(w)
                    stack.append(w)
        comp.sort()
        out.append(TjurinaComponent(tuple(comp), _is_bamboo(g, comp)))
    return out


def _is_bamboo(g: PlumbingGraph, comp: list[int]) -> bool:
    """A string of non-nodes ending in a vertex of valency 1 in the whole graph."""
    cs = set(comp)
    if any(is_node(g, v) for v in comp):
        return False
    inner_deg = {v: sum(1 for w in g.neighbors(v) if w in cs) for v in comp}
    inner_edges = sum(inner_deg.values()) // 2
    if inner_edges != len(comp) - 1:
        return False  # contains a cycle or a multi-edge
    if any(d > 2 for d in inner_deg.values()):
        return False
    return any(g.valency(v) == 1 for v in comp)


def thick_thin(g: PlumbingGraph) -> ThickThinDecomposition:
    comps = tjurina_components(g)
    lnodes = [v for v in g.ids if is_L_curve(g, v)]
    attached: dict[int, list[tuple[int, ...]]] = {v: [] for v in lnodes}
    thin = []
    for c in comps:
        if c.is_bamboo:
            anchors = sorted({w for v in c.vertices for w in g.neighbors(v) if w in attached})
            attached[anchors[0]].append(c.vertices)
        else:
            thin.append(c)
    thick = tuple(ThickPiece(v, tuple(sorted(attached[v]))) for v in lnodes)
    return ThickThinDecomposition(thick, tuple(thin), _conical(g))


def _conical(g: PlumbingGraph) -> bool:
    nodes = [v for v in g.ids if is_node(g, v)]
    return len(nodes) == 1 and is_L_curve(g, nodes[0])


def is_metrically_conical(g: PlumbingGraph) -> bool:
    _require_z1(g)
    if adjacent_L_edges(g):
        raise DomainError("two L-curves intersect; separate them first", kind="adjacent_L_curves")
    return _conical(g)


def decompose(g: PlumbingGraph) -> tuple[PlumbingGraph, ThickThinDecomposition]:
    """Separate L-curves, then decompose.  Returns the separated graph too."""
    h = separate_L_nodes(g)
    return h, thick_thin(h)
