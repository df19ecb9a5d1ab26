"""Hirzebruch-Jung continued fractions and the fast-loop core criterion.

[b_1, ..., b_n] = b_1 - 1/[b_2, ..., b_n].  A chain of rational curves with
Euler weights -b_i plumbs to the lens space L(p, q) with p/q = [b_1..b_n].
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import DomainError
from .graph_core import Z1, Arrow, PlumbingGraph


def seifert_pair(bs: Sequence[int]) -> tuple[int, int]:
    """Numerator and denominator of [b_1..b_n] via p = b_1 p' - q', q = p'.

    Unlike :func:`cf_eval` this accepts entries equal to 1, which occur on
    non-minimal strings (for instance after a blow-up).
    """
    if not bs:
        raise DomainError("empty continued fraction", kind="bad_continued_fraction")
    p, q = 1, 0
    for b in reversed(bs):
        p, q = b * p - q, p
    return p, q


def cf_eval(bs: Sequence[int]) -> Fraction:
    if not bs:
        raise DomainError("empty continued fraction", kind="bad_continued_fraction")
    if any(b < 2 for b in bs):
        raise DomainError("continued fraction entries must be >= 2", kind="bad_continued_fraction")
    p, q = seifert_pair(bs)
    return Fraction(p, q)


def hj_expansion(p: int, q: int) -> list[int]:
    """Entries b_i >= 2 with [b_1..b_n] = p/q."""
    if not (1 <= q < p) or gcd(p, q) != 1:
        raise DomainError(f"need coprime 1 <= q < p, got p={p}, q={q}", kind="bad_parameters")
    out = []
    while q:
        b = -(-p // q)
        out.append(b)
        p, q = q, b * q - p
    return out


def lens_z1_arrows(bs: Sequence[int]) -> list[tuple[int, int]]:
    """Arrow counts making the all-ones vector the z1 multiplicities."""
    n = len(bs)
    out = []
    for i, b in enumerate(bs):
        nbrs = (i > 0) + (i < n - 1)
        if b - nbrs > 0:
            out.append((i + 1, b - nbrs))
    return out


def hj_bamboo(p: int, q: int, decorate: bool = True) -> PlumbingGraph:
    """Bamboo 1-2-...-n with Euler weights -b_i.

    With ``decorate`` the z1 arrows of the cyclic quotient are attached: its
    generic linear form has multiplicity 1 on every curve.
    """
    bs = hj_expansion(p, q)
    verts = {i + 1: (-b, 0) for i, b in enumerate(bs)}
    edges = tuple((i, i + 1) for i in range(1, len(bs)))
    arrows = tuple(Arrow(Z1, v, c) for v, c in lens_z1_arrows(bs)) if decorate else ()
    return PlumbingGraph(verts, edges, arrows)


def core_multiple(m_node: int, m_first: int, alpha: int, beta: int) -> int:
    """lambda = (m_first/d) alpha - (m_node/d) beta with d = gcd(m_node, m_first)."""
    d = gcd(m_node, m_first)
    return (m_first // d) * alpha - (m_node // d) * beta


def _bamboo_order(g: PlumbingGraph) -> list[int]:
    if len(g.vertices) == 1:
        return list(g.ids)
    if len(g.edges) != len(g.vertices) - 1 or not g.is_connected():
        raise DomainError("graph is not a bamboo", kind="not_a_bamboo")
    if any(g.valency(v) > 2 for v in g.ids) or len(set(g.edges)) != len(g.edges):
        raise DomainError("graph is not a bamboo", kind="not_a_bamboo")
    start = min(v for v in g.ids if g.valency(v) == 1)
    order, prev = [start], None
    while len(order) < len(g.vertices):
        cur = order[-1]
        nxt = [w for w in g.neighbors(cur) if w != prev][0]
        prev = cur
        order.append(nxt)
    return order


def string_beyond(g: PlumbingGraph, node: int, first: int) -> list[int]:
    """Vertices reached from ``first`` without crossing back over the cut.

    The part beyond the cut must itself be a string starting at ``first``.
    """
    if g.edge_multiplicity(node, first) != 1:
        raise DomainError(f"no single edge {node}-{first}", kind="edge_not_found")
    out, prev, cur = [first], node, first
    while True:
        nxt = [w for w in g.neighbors(cur) if w != prev]
        if not nxt:
            return out
        if len(nxt) > 1:
            raise DomainError("the side beyond the cut is not a string", kind="not_a_string")
        prev, cur = cur, nxt[0]
        if cur in out or cur == node:
            raise DomainError("the side beyond the cut is not a string", kind="not_a_string")
        out.append(cur)


def cut_lambda(g: PlumbingGraph, node: int, first: int, m: dict[int, int]) -> int:
    """Core criterion integer for cutting the edge node-first.

    alpha/beta is read from the attachment vertex ``first`` outward.
    """
    string = string_beyond(g, node, first)
    alpha, beta = seifert_pair([-g.euler(v) for v in string])
    return core_multiple(m[node], m[first], alpha, beta)


def lens_fastloop_check(g: PlumbingGraph, cut: tuple[int, int]) -> bool:
    """0 < alpha - beta < p for the sub-bamboo beyond the (ordered) cut edge."""
    order = _bamboo_order(g)
    if any(g.euler(v) > -2 for v in g.ids):
        raise DomainError("lens bamboo entries must be <= -2", kind="not_a_bamboo")
    node, first = cut
    if first not in g.vertices or node not in g.vertices or g.edge_multiplicity(node, first) == 0:
        raise DomainError(f"edge {node}-{first} not found", kind="edge_not_found")
    p, _ = seifert_pair([-g.euler(v) for v in order])
    string = string_beyond(g, node, first)
    alpha, beta = seifert_pair([-g.euler(v) for v in string])
    lam = core_multiple(1, 1, alpha, beta)
    return 0 < lam < p


def interior_cuts(g: PlumbingGraph) -> list[tuple[int, int]]:
    """Both orientations of every edge of a bamboo."""
    _bamboo_order(g)
    return [c for u, w in g.edges for c in ((u, w), (w, u))]
