"""Decorated plumbing graphs.

A plumbing graph has one vertex per exceptional curve (Euler weight = self
intersection, plus a genus), one edge per intersection point between two
curves, and arrows recording where strict transforms of functions cross the
exceptional divisor.  Graphs are immutable; every transformation returns a new
graph.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, GraphParseError

Z1 = "z1"
POLAR = "polar"


@dataclass(frozen=True, order=True)
class Arrow:
    label: str
    at: int
    count: int = 1


@dataclass(frozen=True)
class PlumbingGraph:
    """Immutable decorated plumbing graph.

    ``vertices`` maps id -> (euler, genus).  ``edges`` is a sorted tuple of
    pairs (u, v) with u < v, repeated for multi-edges.  ``arrows`` is sorted by
    (label, at) with at most one entry per pair.
    """

    vertices: Mapping[int, tuple[int, int]]
    edges: tuple[tuple[int, int], ...] = ()
    arrows: tuple[Arrow, ...] = ()
    _adj: Mapping[int, tuple[int, ...]] = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        verts = {int(v): (int(e), int(g)) for v, (e, g) in sorted(dict(self.vertices).items())}
        for v, (_, g) in verts.items():
            if v < 1:
                raise DomainError(f"vertex id {v} must be a positive integer", kind="bad_vertex")
            if g < 0:
                raise DomainError(f"vertex {v} has negative genus", kind="bad_vertex")
        edges = []
        for u, w in self.edges:
            if u == w:
                raise DomainError(f"self-loop at vertex {u}", kind="self_loop")
            for x in (u, w):
                if x not in verts:
                    raise DomainError(f"edge references unknown vertex {x}", kind="dangling_reference")
            edges.append((min(u, w), max(u, w)))
        edges.sort()
        merged: Counter = Counter()
        for a in self.arrows:
            if a.at not in verts:
                raise DomainError(f"arrow {a.label} references unknown vertex {a.at}", kind="dangling_reference")
            if a.count < 1:
                raise DomainError(f"arrow {a.label} at {a.at} has non-positive count", kind="bad_arrow")
            merged[(a.label, a.at)] += a.count
        arrows = tuple(Arrow(lab, at, c) for (lab, at), c in sorted(merged.items()))
        adj: dict[int, list[int]] = {v: [] for v in verts}
        for u, w in edges:
            adj[u].append(w)
            adj[w].append(u)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "arrows", arrows)
        object.__setattr__(self, "_adj", {v: tuple(sorted(n)) for v, n in adj.items()})

    def __hash__(self):
        return hash((tuple(self.vertices.items()), self.edges, self.arrows))

    # -- queries ---------------------------------------------------------

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(self.vertices)

    def euler(self, v: int) -> int:
        return self.vertices[v][0]

    def genus(self, v: int) -> int:
        return self.vertices[v][1]

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Neighbors of v, repeated according to edge multiplicity."""
        return self._adj[v]

    def valency(self, v: int) -> int:
        """Number of edge ends at v (arrows are not counted)."""
        return len(self._adj[v])

    def edge_multiplicity(self, u: int, w: int) -> int:
        return self.edges.count((min(u, w), max(u, w)))

    def labels(self) -> tuple[str, ...]:
        return tuple(sorted({a.label for a in self.arrows}))

    def arrow_counts(self, label: str) -> dict[int, int]:
        return {a.at: a.count for a in self.arrows if a.label == label}

    def arrows_at(self, v: int) -> tuple[Arrow, ...]:
        return tuple(a for a in self.arrows if a.at == v)

    def next_id(self) -> int:
        return max(self.vertices, default=0) + 1

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        start = next(iter(self.vertices))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in self._adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    # -- functional updates ----------------------------------------------

    def replace(self, vertices=None, edges=None, arrows=None) -> "PlumbingGraph":
        return PlumbingGraph(
            vertices=self.vertices if vertices is None else vertices,
            edges=self.edges if edges is None else tuple(edges),
            arrows=self.arrows if arrows is None else tuple(arrows),
        )

    def with_arrows(self, arrows: Iterable[Arrow]) -> "PlumbingGraph":
        return self.replace(arrows=tuple(self.arrows) + tuple(arrows))

    def without_label(self, label: str) -> "PlumbingGraph":
        return self.replace(arrows=[a for a in self.arrows if a.label != label])

    def relabel(self, mapping: Mapping[int, int]) -> "PlumbingGraph":
        """Rename vertex ids through ``mapping`` (must be injective)."""
        if len(set(mapping[v] for v in self.vertices)) != len(self.vertices):
            raise DomainError("relabelling is not injective", kind="bad_relabel")
        return PlumbingGraph(
            vertices={mapping[v]: d for v, d in self.vertices.items()},
            edges=[(mapping[u], mapping[w]) for u, w in self.edges],
            arrows=[Arrow(a.label, mapping[a.at], a.count) for a in self.arrows],
        )


def make_graph(
    vertices: Mapping[int, int | tuple[int, int]],
    edges: Iterable[tuple[int, int]] = (),
    arrows: Iterable[tuple] = (),
) -> PlumbingGraph:
    """Convenience constructor.

    ``vertices`` maps id to an euler weight or an (euler, genus) pair; arrows
    are (label, at) or (label, at, count) tuples.
    """
    verts = {v: (d, 0) if isinstance(d, int) else tuple(d) for v, d in vertices.items()}
    arrs = [a if isinstance(a, Arrow) else Arrow(*a) for a in arrows]
    return PlumbingGraph(vertices=verts, edges=tuple(edges), arrows=tuple(arrs))


# -- intersection matrix ------------------------------------------------------


@dataclass(frozen=True)
class IntersectionMatrix:
    order: tuple[int, ...]
    entries: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.order)

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def intersection_matrix(g: PlumbingGraph) -> IntersectionMatrix:
    order = g.ids
    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    rows = [[0] * n for _ in range(n)]
    for v in order:
        rows[pos[v]][pos[v]] = g.euler(v)
    for u, w in g.edges:
        rows[pos[u]][pos[w]] += 1
        rows[pos[w]][pos[u]] += 1
    return IntersectionMatrix(order, tuple(tuple(r) for r in rows))


def leading_minors(entries: Sequence[Sequence[int]]) -> list[int]:
    """Leading principal minors D_1..D_n, each an exact Bareiss determinant."""
    n = len(entries)
    out = []
    for k in range(1, n + 1):
        out.append(_det([list(r[:k]) for r in entries[:k]]))
    return out


def _det(a: list[list[int]]) -> int:
    """Exact determinant (Bareiss with row pivoting)."""
    n = len(a)
    if n == 0:
        return 1
    a = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def determinant(m: IntersectionMatrix) -> int:
    return _det([list(r) for r in m.entries])


def is_negative_definite(m: IntersectionMatrix) -> bool:
    """Sylvester test: (-1)^k D_k > 0 for every leading minor."""
    if len(m) == 0:
        return False
    rows = m.entries
    for i in range(len(rows)):
        for j in range(i):
            if rows[i][j] != rows[j][i]:
                return False
    return all((d < 0) if k % 2 == 1 else (d > 0) for k, d in enumerate(leading_minors(rows), start=1))


def solve_exact(entries: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[Fraction]:
    """Solve A x = b exactly over Q using fraction-free forward elimination."""
    n = len(entries)
    a = [list(entries[i]) + [rhs[i]] for i in range(n)]
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    break
            else:
                raise DomainError("singular intersection matrix", kind="singular_matrix")
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(a[i][n])
        for j in range(i + 1, n):
            s -= a[i][j] * x[j]
        x[i] = s / a[i][i]
    return x


def require_negative_definite(g: PlumbingGraph) -> None:
    if not g.is_connected():
        raise DomainError("graph is not connected", kind="not_connected")
    if not is_negative_definite(intersection_matrix(g)):
        raise DomainError("intersection matrix is not negative definite", kind="not_negative_definite")


def validate(g: PlumbingGraph) -> list[str]:
    """Human readable problems with g as a resolution graph (empty if fine)."""
    problems = []
    if not g.is_connected():
        problems.append("not_connected")
    if g.vertices and not is_negative_definite(intersection_matrix(g)):
        problems.append("not_negative_definite")
    return problems


# -- blow-ups and blow-downs --------------------------------------------------


def blow_up_edge(g: PlumbingGraph, e: tuple[int, int]) -> PlumbingGraph:
    """Blow up one intersection point represented by edge e."""
    u, w = min(e), max(e)
    edges = list(g.edges)
    try:
        edges.remove((u, w))
    except ValueError:
        raise DomainError(f"edge {u}-{w} not found", kind="edge_not_found") from None
    new = g.next_id()
    verts = dict(g.vertices)
    verts[u] = (verts[u][0] - 1, verts[u][1])
    verts[w] = (verts[w][0] - 1, verts[w][1])
    verts[new] = (-1, 0)
    edges += [(u, new), (w, new)]
    return g.replace(vertices=verts, edges=edges)


def blow_up_point(g: PlumbingGraph, v: int) -> PlumbingGraph:
    """Blow up a free point of E_v (not on any other curve or arrow)."""
    if v not in g.vertices:
        raise DomainError(f"vertex {v} not found", kind="vertex_not_found")
    new = g.next_id()
    verts = dict(g.vertices)
    verts[v] = (verts[v][0] - 1, verts[v][1])
    verts[new] = (-1, 0)
    return g.replace(vertices=verts, edges=list(g.edges) + [(v, new)])


def blow_down(g: PlumbingGraph, v: int) -> PlumbingGraph:
    """Contract a rational (-1)-curve of valency <= 2 carrying no arrows."""
    if v not in g.vertices:
        raise DomainError(f"vertex {v} not found", kind="vertex_not_found")
    nbrs = g.neighbors(v)
    if g.euler(v) != -1 or g.genus(v) != 0 or len(nbrs) > 2 or g.arrows_at(v):
        raise DomainError(f"vertex {v} cannot be blown down", kind="not_blow_downable")
    if len(nbrs) == 2 and nbrs[0] == nbrs[1]:
        raise DomainError(f"blowing down {v} would create a self-loop", kind="not_blow_downable")
    if len(g.vertices) == 1:
        raise DomainError("cannot blow down the only vertex", kind="not_blow_downable")
    verts = {x: d for x, d in g.vertices.items() if x != v}
    for x in nbrs:
        verts[x] = (verts[x][0] + 1, verts[x][1])
    edges = [e for e in g.edges if v not in e]
    if len(nbrs) == 2:
        edges.append((nbrs[0], nbrs[1]))
    return g.replace(vertices=verts, edges=edges)


# -- text format --------------------------------------------------------------

_KV = re.compile(r"^([a-z_]+)=(.*)$")
_INT = re.compile(r"^[+-]?\d+$")
_UINT = re.compile(r"^\d+$")
_LABEL = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


def _tokens(line: str) -> list[tuple[str, int]]:
    """Split a line into (token, 1-based column) pairs, dropping comments."""
    hash_pos = line.find("#")
    if hash_pos >= 0:
        line = line[:hash_pos]
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _parse_kv(tok: str, col: int, lineno: int, allowed: Sequence[str]) -> tuple[str, str]:
    m = _KV.match(tok)
    if not m or m.group(1) not in allowed:
        raise GraphParseError(f"expected one of {', '.join(k + '=' for k in allowed)}, got {tok!r}", lineno, col)
    return m.group(1), m.group(2)


def _parse_int(s: str, col: int, lineno: int, unsigned: bool = False, what: str = "integer") -> int:
    if not (_UINT if unsigned else _INT).match(s):
        raise GraphParseError(f"expected {what}, got {s!r}", lineno, col)
    return int(s)


def parse_graph(text: str) -> PlumbingGraph:
    """Parse the line-oriented graph format into a PlumbingGraph."""
    verts: dict[int, tuple[int, int]] = {}
    edges: list[tuple[tuple[int, int], int, int]] = []
    arrows: list[tuple[Arrow, int, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        toks = _tokens(line)
        if not toks:
            continue
        head, hcol = toks[0]
        rest = toks[1:]
        if head == "vertex":
            if not rest:
                raise GraphParseError("vertex needs an id", lineno, hcol + len(head))
            vid = _parse_int(rest[0][0], rest[0][1], lineno, unsigned=True, what="vertex id")
            if vid < 1:
                raise GraphParseError("vertex id must be positive", lineno, rest[0][1])
            kv = {}
            for tok, col in rest[1:]:
                k, val = _parse_kv(tok, col, lineno, ("euler", "genus"))
                if k in kv:
                    raise GraphParseError(f"repeated key {k}", lineno, col)
                kv[k] = _parse_int(val, col + len(k) + 1, lineno, unsigned=(k == "genus"))
            if "euler" not in kv:
                raise GraphParseError("vertex needs euler=<int>", lineno, hcol)
            if vid in verts:
                raise GraphParseError(f"duplicate vertex id {vid}", lineno, rest[0][1], kind="duplicate_vertex")
            verts[vid] = (kv["euler"], kv.get("genus", 0))
        elif head == "edge":
            if len(rest) != 2:
                raise GraphParseError("edge needs exactly two vertex ids", lineno, hcol)
            u = _parse_int(rest[0][0], rest[0][1], lineno, unsigned=True, what="vertex id")
            w = _parse_int(rest[1][0], rest[1][1], lineno, unsigned=True, what="vertex id")
            if u == w:
                raise GraphParseError(f"self-loop at vertex {u}", lineno, rest[1][1], kind="self_loop")
            edges.append(((u, w), lineno, rest[0][1]))
        elif head == "arrow":
            if not rest:
                raise GraphParseError("arrow needs a label", lineno, hcol + len(head))
            label, lcol = rest[0]
            if not _LABEL.match(label):
                raise GraphParseError(f"bad arrow label {label!r}", lineno, lcol)
            kv = {}
            for tok, col in rest[1:]:
                k, val = _parse_kv(tok, col, lineno, ("at", "count"))
                if k in kv:
                    raise GraphParseError(f"repeated key {k}", lineno, col)
                kv[k] = _parse_int(val, col + len(k) + 1, lineno, unsigned=True)
            if "at" not in kv:
                raise GraphParseError("arrow needs at=<id>", lineno, hcol)
            count = kv.get("count", 1)
            if count < 1:
                raise GraphParseError("arrow count must be positive", lineno, hcol)
            arrows.append((Arrow(label, kv["at"], count), lineno, lcol))
        else:
            raise GraphParseError(f"unknown directive {head!r}", lineno, hcol)
    for (u, w), lineno, col in edges:
        for x in (u, w):
            if x not in verts:
                raise GraphParseError(f"edge references undeclared vertex {x}", lineno, col, kind="dangling_reference")
    for a, lineno, col in arrows:
        if a.at not in verts:
            raise GraphParseError(f"arrow references undeclared vertex {a.at}", lineno, col, kind="dangling_reference")
    if not verts:
        raise GraphParseError("no vertices declared", 1, 1, kind="empty_graph")
    return PlumbingGraph(verts, tuple(e for e, _, _ in edges), tuple(a for a, _, _ in arrows))


def serialize_graph(g: PlumbingGraph) -> str:
    """Canonical text form: vertices, then edges, then arrows, all sorted."""
    lines = [f"vertex {v} euler={e} genus={gen}" for v, (e, gen) in g.vertices.items()]
    lines += [f"edge {u} {w}" for u, w in g.edges]
    for a in g.arrows:
        lines.append(f"arrow {a.label} at={a.at}" + (f" count={a.count}" if a.count != 1 else ""))
    return "\n".join(lines) + "\n"


def to_dot(g: PlumbingGraph, filled: Iterable[int] = (), boxes: Iterable[Iterable[int]] = ()) -> str:
    filled = set(filled)
    out = ["graph G {", "  node [shape=circle];"]
    for i, box in enumerate(boxes):
        out.append(f"  subgraph cluster_{i} {{ style=rounded; " + " ".join(f"v{v};" for v in sorted(box)) + " }")
    for v, (e, gen) in g.vertices.items():
        lab = f"{e}" + (f" [{gen}]" if gen else "")
        style = ', style=filled, fillcolor=black, fontcolor=white' if v in filled else ""
        out.append(f'  v{v} [label="{lab}"{style}];')
    for u, w in g.edges:
        out.append(f"  v{u} -- v{w};")
    for i, a in enumerate(g.arrows):
        out.append(f'  a{i} [shape=point, label=""]; v{a.at} -- a{i} [label="{a.label}x{a.count}"];')
    out.append("}")
    return "\n".join(out) + "\n"
