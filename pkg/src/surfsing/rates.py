"""Rates at nodes and the rate-decorated classification graph.

The classification graph has one piece per L-node (rate 1), one per T-node
(its rate), and one special annular piece for every node-to-node string of the
resolution graph that meets the strict transform of the polar curve.  Strings
without polar arrows become plain edges between node pieces.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .cycles import multiplicities
from .errors import DomainError
from .graph_core import POLAR, PlumbingGraph
from .thickthin import ThickThinDecomposition, is_L_curve, is_node

THICK = "thick"
THIN_SEIFERT = "thin-Seifert"
SPECIAL_ANNULAR = "special-annular"


def hironaka_number(g: PlumbingGraph, v: int, base: str, aux: str) -> Fraction:
    """m_v(aux) / m_v(base); ``aux`` may be a generic combination like ``x+y``."""
    if v not in g.vertices:
        raise DomainError(f"vertex {v} not found", kind="vertex_not_found")
    return Fraction(multiplicities(g, aux)[v], multiplicities(g, base)[v])


def hironaka_numbers(g: PlumbingGraph, base: str, aux: str) -> dict[int, Fraction]:
    mb, ma = multiplicities(g, base), multiplicities(g, aux)
    return {v: Fraction(ma[v], mb[v]) for v in g.ids}


@dataclass(frozen=True)
class Piece:
    id: int
    kind: str
    vertices: tuple[int, ...]
    q: Fraction


@dataclass(frozen=True)
class RateGraph:
    pieces: tuple[Piece, ...]
    edges: tuple[tuple[int, int], ...]
    strings: tuple[tuple[int, ...], ...] = field(default=())

    def piece(self, pid: int) -> Piece:
        return self.pieces[pid]

    def rates(self) -> list[Fraction]:
        return [p.q for p in self.pieces]

    def count(self, kind: str) -> int:
        return sum(1 for p in self.pieces if p.kind == kind)

    def to_json(self) -> dict:
        return {
            "pieces": [
                {"id": p.id, "kind": p.kind, "q": fraction_str(p.q), "vertices": list(p.vertices)}
                for p in self.pieces
            ],
            "edges": [list(e) for e in self.edges],
        }

    def to_dot(self) -> str:
        shapes = {THICK: "doublecircle", THIN_SEIFERT: "circle", SPECIAL_ANNULAR: "box"}
        out = ["graph Gamma0 {"]
        for p in self.pieces:
            verts = ",".join(map(str, p.vertices))
            out.append(f'  p{p.id} [shape={shapes[p.kind]}, label="{fraction_str(p.q)}\\n[{verts}]"];')
        for a, b in self.edges:
            out.append(f"  p{a} -- p{b};")
        out.append("}")
        return "\n".join(out) + "\n"


def fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(s: str) -> Fraction:
    try:
        q = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"bad rational {s!r}", kind="bad_rational") from None
    return q


def node_strings(g: PlumbingGraph) -> tuple[list[tuple[int, tuple[int, ...], int]], list[tuple[int, ...]]]:
    """Maximal strings of non-nodes.

    Returns the node-to-node strings as (start node, interior, end node) and
    the leaf strings hanging off a single node.  Every copy of a multi-edge is
    walked separately, so parallel strings stay distinct.
    """
    incident: dict[int, list[int]] = {v: [] for v in g.ids}
    for i, (u, w) in enumerate(g.edges):
        incident[u].append(i)
        incident[w].append(i)
    nodes = {v for v in g.ids if is_node(g, v)}
    between, leaves, seen = [], [], set()
    for n in sorted(nodes):
        for i in incident[n]:
            used, path = [i], []
            u, w = g.edges[i]
            cur = w if u == n else u
            while cur not in nodes:
                path.append(cur)
                rest = [j for j in incident[cur] if j != used[-1]]
                if not rest:
                    break
                j = rest[0]
                used.append(j)
                u, w = g.edges[j]
                cur = w if u == cur else u
            key = frozenset(used)
            if key in seen:
                continue
            seen.add(key)
            if cur in nodes:
                if (cur, tuple(reversed(path))) < (n, tuple(path)):
                    between.append((cur, tuple(reversed(path)), n))
                else:
                    between.append((n, tuple(path), cur))
            else:
                leaves.append(tuple(path))
    return between, leaves


def build_rate_graph(
    g: PlumbingGraph,
    dec: ThickThinDecomposition,
    rates: Mapping[int, Fraction],
) -> RateGraph:
    """Assemble the classification graph from a separated, decomposed graph.

    ``rates`` must give the rate of every T-node and, for every node-to-node
    string meeting the polar, the rate at one of its polar-carrying vertices.
    L-nodes default to rate 1.
    """
    rates = {v: Fraction(q) for v, q in rates.items()}
    lnodes = {p.lnode for p in dec.thick}
    pieces: list[Piece] = []
    piece_of: dict[int, int] = {}
    for v in g.ids:
        if not is_node(g, v):
            continue
        if v in lnodes or is_L_curve(g, v):
            pieces.append(Piece(len(pieces), THICK, (v,), rates.get(v, Fraction(1))))
        else:
            if v not in rates:
                raise DomainError(f"missing rate for T-node {v}", kind="missing_rate", vertex=v)
            pieces.append(Piece(len(pieces), THIN_SEIFERT, (v,), rates[v]))
        piece_of[v] = pieces[-1].id
    polar_at = set(g.arrow_counts(POLAR))
    between, leaves = node_strings(g)
    for s in leaves:
        if polar_at & set(s):
            warnings.warn(f"polar arrow on the string {list(s)} ending at a leaf is ignored", stacklevel=2)
    edges = []
    strings = []
    for a, path, b in sorted(between):
        hits = sorted(polar_at & set(path))
        if hits:
            rated = [v for v in hits if v in rates]
            if not rated:
                raise DomainError(
                    f"missing rate for the polar string {list(path)}", kind="missing_rate", vertex=hits[0]
                )
            pid = len(pieces)
            pieces.append(Piece(pid, SPECIAL_ANNULAR, tuple(path), rates[rated[0]]))
            edges += [(piece_of[a], pid), (pid, piece_of[b])]
        else:
            edges.append((piece_of[a], piece_of[b]))
        strings.append(path)
    edges = sorted(tuple(sorted(e)) for e in edges)
    return RateGraph(tuple(pieces), tuple(edges), tuple(strings))


def validate_rate_graph(rg: RateGraph) -> list[str]:
    """Violations of: rate 1 exactly on thick pieces, adjacent rates distinct,
    special annular rates above both neighbours."""
    out = []
    nbrs: dict[int, list[int]] = {p.id: [] for p in rg.pieces}
    for a, b in rg.edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    for p in rg.pieces:
        if p.q < 1:
            out.append(f"piece {p.id} has rate {fraction_str(p.q)} < 1")
        if (p.kind == THICK) != (p.q == 1):
            out.append(f"piece {p.id} ({p.kind}) has rate {fraction_str(p.q)}")
    for a, b in rg.edges:
        if rg.pieces[a].q == rg.pieces[b].q:
            out.append(f"adjacent pieces {a} and {b} share rate {fraction_str(rg.pieces[a].q)}")
    for p in rg.pieces:
        if p.kind == SPECIAL_ANNULAR:
            for n in nbrs[p.id]:
                if not p.q > rg.pieces[n].q:
                    out.append(f"special annulus {p.id} rate {fraction_str(p.q)} does not exceed neighbour {n}")
    return out


def rate_graph_from_json(data: dict) -> RateGraph:
    pieces = tuple(
        Piece(int(p["id"]), p["kind"], tuple(p["vertices"]), parse_fraction(p["q"])) for p in data["pieces"]
    )
    return RateGraph(pieces, tuple(tuple(e) for e in data["edges"]))
