"""Carrousel decompositions of discriminant data and their reduction.

Discriminant branches tangent to the x-axis are given by Puiseux series
y = sum a_i x^{p_i}.  Coefficients are opaque tokens: only equality of tokens
matters.  Distinct tokens are assumed never to be Galois conjugates of each
other, so two branches with different tokens at the same exponent separate
there.

Pipeline: truncate -> build the carrousel tree -> lift it through the double
cover z^2 = f branched over the marked branches -> reduce with the rewrite
rules to the minimal decomposition graph.

Conjugates are handled exactly.  Replacing x^{1/N} by exp(2 pi i k / N) x^{1/N}
multiplies the coefficient of x^e by exp(2 pi i k e), so a conjugate is a list
of (exponent, token, phase) with phase = frac(k e).  The order of contact
ord(beta - h) of two such series is the exponent of their first difference.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import networkx as nx

from .errors import DomainError, GraphParseError

INF = None  # marker for identical series (infinite contact order)


# -- branch data --------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Term:
    exp: Fraction
    token: str


@dataclass(frozen=True)
class PuiseuxBranch:
    name: str
    terms: tuple[Term, ...] = ()

    def __post_init__(self):
        terms = tuple(Term(Fraction(t.exp), str(t.token)) for t in self.terms)
        object.__setattr__(self, "terms", terms)
        for a, b in zip(terms, terms[1:]):
            if not a.exp < b.exp:
                raise DomainError(f"branch {self.name}: exponents must increase", kind="bad_branch")
        if terms and terms[0].exp <= 1:
            raise DomainError(f"branch {self.name}: first exponent must exceed 1", kind="bad_branch")
        if any(t.token in ("", "0") for t in terms):
            raise DomainError(f"branch {self.name}: zero coefficients are omitted terms", kind="bad_branch")

    @property
    def exponents(self) -> tuple[Fraction, ...]:
        return tuple(t.exp for t in self.terms)


@dataclass(frozen=True)
class TransverseBranch:
    """A branch of the discriminant tangent to a different line.

    Inside the cone it only contributes ``mult`` to windings around x = 0.
    """

    name: str
    mult: int = 1


@dataclass(frozen=True)
class BranchData:
    branches: tuple[PuiseuxBranch, ...]
    transverse: tuple[TransverseBranch, ...] = ()
    marked: frozenset = frozenset()

    @classmethod
    def double_cover(cls, branches: Sequence[PuiseuxBranch], transverse: Sequence[TransverseBranch] = ()):
        """z^2 = f: every branch of f = 0 is a branch point."""
        names = {b.name for b in branches} | {t.name for t in transverse}
        return cls(tuple(branches), tuple(transverse), frozenset(names))


def branch(name: str, *terms: tuple) -> PuiseuxBranch:
    """``branch("b", ("4/3", "a"), ("13/6", "b"))``."""
    return PuiseuxBranch(name, tuple(Term(Fraction(e), tok) for e, tok in terms))


def denominators_lcm(exps: Iterable[Fraction]) -> int:
    out = 1
    for e in exps:
        out = lcm(out, Fraction(e).denominator)
    return out


def characteristic_exponents(b: PuiseuxBranch) -> list[Fraction]:
    out, den = [], 1
    for e in b.exponents:
        if den % e.denominator:
            out.append(e)
        den = lcm(den, e.denominator)
    return out


def truncate_branches(bs: Sequence[PuiseuxBranch]) -> list[PuiseuxBranch]:
    """Cut each branch after its last characteristic or separating exponent.

    Against another branch with k common leading terms, a branch keeps the
    common part, plus its own term k when the other branch has no term k or
    has it at an exponent not below this one.
    """
    names = [b.name for b in bs]
    if len(set(names)) != len(names):
        raise DomainError("branch names must be distinct", kind="bad_branch")
    keep = []
    for i, b in enumerate(bs):
        chars = set(characteristic_exponents(b))
        cut = max((j + 1 for j, t in enumerate(b.terms) if t.exp in chars), default=0)
        for j, o in enumerate(bs):
            if i == j:
                continue
            k = _common_prefix(b.terms, o.terms)
            if k == len(b.terms) == len(o.terms):
                raise DomainError(f"branches {b.name} and {o.name} coincide", kind="duplicate_branch")
            need = k
            if k < len(b.terms) and (k >= len(o.terms) or b.terms[k].exp <= o.terms[k].exp):
                need = k + 1
            cut = max(cut, need)
        keep.append(PuiseuxBranch(b.name, b.terms[:cut]))
    seen = {}
    for b in keep:
        if b.terms in seen:
            raise DomainError(f"branches {seen[b.terms]} and {b.name} coincide after truncation", kind="duplicate_branch")
        seen[b.terms] = b.name
    return keep


def _common_prefix(a: Sequence[Term], b: Sequence[Term]) -> int:
    k = 0
    while k < len(a) and k < len(b) and a[k] == b[k]:
        k += 1
    return k


# -- conjugates and contact orders --------------------------------------------

Conj = tuple  # tuple of (exp, token, phase)


def conjugates(terms: Sequence[Term]) -> list[Conj]:
    n = denominators_lcm(t.exp for t in terms)
    out = []
    for k in range(n):
        out.append(tuple((t.exp, t.token, (k * t.exp) % 1) for t in terms))
    return out


def principal(terms: Sequence[Term]) -> Conj:
    return tuple((t.exp, t.token, Fraction(0)) for t in terms)


def contact_order(a: Conj, b: Conj):
    """Exponent of the leading term of a - b (None when a == b)."""
    for x, y in zip(a, b):
        if x != y:
            return min(x[0], y[0])
    if len(a) == len(b):
        return INF
    return (a[len(b)] if len(a) > len(b) else b[len(a)])[0]


# -- carrousel tree -----------------------------------------------------------


@dataclass(frozen=True)
class Circle:
    """|y - center| = const |x|^r; encloses series with contact > r (or >= r)."""

    center: Conj
    r: Fraction
    strict: bool

    def encloses(self, beta: Conj) -> bool:
        o = contact_order(beta, self.center)
        if o is INF:
            return True
        return o > self.r if self.strict else o >= self.r


@dataclass(frozen=True)
class TreePiece:
    id: int
    kind: str  # "A", "B" or "D"
    q: Fraction  # B/D exponent, or lower rate of an A piece
    q_high: Fraction | None  # upper rate of an A piece
    center: tuple[Term, ...]
    parent: int | None
    role: str  # root, central, coefficient
    tokens: tuple[str, ...] = ()
    boundary: int | None = None
    contains: tuple[str, ...] = ()
    outer: Circle | None = None
    holes: tuple[Circle, ...] = ()

    @property
    def contains_branch(self) -> bool:
        return bool(self.contains)

    @property
    def copies(self) -> int:
        return denominators_lcm(t.exp for t in self.center)

    def label(self) -> str:
        if self.kind == "A":
            return f"A({_fs(self.q)},{_fs(self.q_high)})"
        if self.kind == "B":
            extra = f" t={len(self.tokens)}"
            extra += f" boundary={self.boundary}" if self.boundary is not None else " boundary=unresolved"
            return f"B({_fs(self.q)}){extra}"
        return f"D({_fs(self.q)})" + (" ⊗" if self.contains else "")


def _fs(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _pq(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class CarrouselTree:
    pieces: tuple[TreePiece, ...]
    branches: tuple[PuiseuxBranch, ...]
    transverse: tuple[TransverseBranch, ...] = ()

    @property
    def root(self) -> TreePiece:
        return self.pieces[0]

    def children(self, pid: int) -> list[TreePiece]:
        return [p for p in self.pieces if p.parent == pid]

    def of_kind(self, kind: str) -> list[TreePiece]:
        return [p for p in self.pieces if p.kind == kind]

    def b_exponents(self) -> list[Fraction]:
        return sorted(p.q for p in self.of_kind("B"))

    def branch_leaves(self) -> list[TreePiece]:
        return [p for p in self.pieces if p.kind == "D" and p.contains]

    def path_to_root(self, pid: int) -> list[TreePiece]:
        out = []
        cur = self.pieces[pid]
        while cur is not None:
            out.append(cur)
            cur = self.pieces[cur.parent] if cur.parent is not None else None
        return out[::-1]

    def leaf_of(self, name: str) -> TreePiece:
        for p in self.branch_leaves():
            if name in p.contains:
                return p
        raise KeyError(name)

    def render(self) -> str:
        lines = []

        def walk(p: TreePiece, prefix: str, last: bool, top: bool):
            lines.append(("" if top else prefix + ("└─ " if last else "├─ ")) + p.label())
            kids = self.children(p.id)
            for i, c in enumerate(kids):
                walk(c, prefix + ("" if top else ("   " if last else "│  ")), i == len(kids) - 1, False)

        walk(self.root, "", True, True)
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "pieces": [
                {
                    "id": p.id,
                    "kind": p.kind,
                    "q": _pq(p.q),
                    **({"q_high": _pq(p.q_high)} if p.q_high is not None else {}),
                    "parent": p.parent,
                    "role": p.role,
                    **({"t": len(p.tokens), "boundary": p.boundary} if p.kind == "B" else {}),
                    **({"branches": list(p.contains)} if p.kind == "D" else {}),
                }
                for p in self.pieces
            ]
        }


def build_carrousel(bs: Sequence[PuiseuxBranch], transverse: Sequence[TransverseBranch] = ()) -> CarrouselTree:
    """Build the carrousel tree of (already truncated) branches."""
    if not bs:
        raise DomainError("no branches given", kind="empty_input")
    bs = list(bs)
    names = [b.name for b in bs]
    if len(set(names)) != len(names):
        raise DomainError("branch names must be distinct", kind="bad_branch")
    if len({b.terms for b in bs}) != len(bs):
        raise DomainError("two branches coincide", kind="duplicate_branch")
    keys: dict[tuple, dict[Fraction, set]] = {}
    for b in bs:
        for k, t in enumerate(b.terms):
            keys.setdefault(b.terms[:k], {}).setdefault(t.exp, set()).add(t.token)
    pieces: list[dict] = []

    def add(**kw) -> int:
        kw["id"] = len(pieces)
        pieces.append(kw)
        return kw["id"]

    def equal_to(f):
        return tuple(b.name for b in bs if b.terms == f)

    def container(f: tuple, q_in: Fraction, parent: int | None, role: str):
        """Pieces inside a disc centred on f entered at rate q_in."""
        f0 = principal(f)
        exps = sorted(keys.get(f, {}))
        if not exps:
            add(kind="D", q=q_in, q_high=None, center=f, parent=parent, role=role,
                contains=equal_to(f), outer=Circle(f0, q_in, parent is not None))
            return
        outer = Circle(f0, q_in, parent is not None)
        a = add(kind="A", q=q_in, q_high=exps[0], center=f, parent=parent, role=role,
                outer=outer, holes=(Circle(f0, exps[0], False),))
        chain(f, exps, 0, a)

    def chain(f: tuple, exps: list, i: int, parent: int):
        p = exps[i]
        f0 = principal(f)
        lf = denominators_lcm(t.exp for t in f)
        lg = denominators_lcm([*(t.exp for t in f), p])
        tokens = tuple(sorted(keys[f][p]))
        holes = [Circle(f0, p, True)]
        for tok in tokens:
            for j in range(lg // lf):
                holes.append(Circle(f0 + ((p, tok, (lf * j * p) % 1),), p, True))
        boundary = 2 + lg // lf if len(tokens) == 1 else None
        bid = add(kind="B", q=p, q_high=None, center=f, parent=parent, role="central" if i else "entry",
                  tokens=tokens, boundary=boundary, outer=Circle(f0, p, False), holes=tuple(holes))
        for tok in tokens:
            container(f + (Term(p, tok),), p, bid, "coefficient")
        if i + 1 < len(exps):
            a = add(kind="A", q=p, q_high=exps[i + 1], center=f, parent=bid, role="central",
                    outer=Circle(f0, p, True), holes=(Circle(f0, exps[i + 1], False),))
            chain(f, exps, i + 1, a)
        else:
            add(kind="D", q=p, q_high=None, center=f, parent=bid, role="central",
                contains=equal_to(f), outer=Circle(f0, p, True))

    container((), Fraction(1), None, "root")
    pieces[0]["role"] = "root"
    return CarrouselTree(tuple(TreePiece(**p) for p in pieces), tuple(bs), tuple(transverse))


def branch_b_path(tree: CarrouselTree, name: str) -> list[Fraction]:
    """Exponents of the B pieces a branch passes through its own coefficient discs.

    A B piece counts when the next piece on the branch's path is one of its
    coefficient discs, i.e. when the branch has a term at that exponent.
    """
    path = tree.path_to_root(tree.leaf_of(name).id)
    out = []
    for cur, nxt in zip(path, path[1:]):
        if cur.kind == "B" and nxt.role == "coefficient":
            out.append(cur.q)
    return out


# -- double cover lifting -----------------------------------------------------


@dataclass
class DVertex:
    id: int
    kind: str  # "A" or "B"
    q: Fraction
    q_high: Fraction | None = None
    root: bool = False
    n: int = 1
    chi: int = 0
    b: int = 0
    phi_id: bool = False
    order: int = 1
    special: bool = False
    source: int | None = None

    def rate_label(self) -> str:
        if self.kind == "A":
            return f"A({_fs(self.q)},{_fs(self.q_high)})"
        return f"B({_fs(self.q)})"


@dataclass
class DecompGraph:
    """Directed graph of lifted pieces; edges point away from the roots.

    Each edge is one boundary torus, recorded with the number of fibre
    circles it carries.
    """

    vertices: dict[int, DVertex] = field(default_factory=dict)
    edges: dict[int, tuple[int, int, int]] = field(default_factory=dict)

    def copy(self) -> "DecompGraph":
        return DecompGraph({k: replace(v) for k, v in self.vertices.items()}, dict(self.edges))

    def out_edges(self, v: int) -> list[int]:
        return sorted(e for e, (s, _, _) in self.edges.items() if s == v)

    def in_edges(self, v: int) -> list[int]:
        return sorted(e for e, (_, d, _) in self.edges.items() if d == v)

    def incident(self, v: int) -> list[int]:
        return sorted(e for e, (s, d, _) in self.edges.items() if v in (s, d))

    def is_disc(self, v: int) -> bool:
        x = self.vertices[v]
        return x.kind == "B" and x.chi == x.n and x.b == x.n

    def is_annulus(self, v: int) -> bool:
        x = self.vertices[v]
        return (x.kind == "B" and not x.root and x.chi == 0 and x.b == 2 * x.n
                and len(self.incident(v)) == 2)

    def genus(self, v: int) -> int:
        x = self.vertices[v]
        per_chi, per_b = x.chi // x.n, x.b // x.n
        return (2 - per_chi - per_b) // 2

    def roots(self) -> list[int]:
        return sorted(v for v, x in self.vertices.items() if x.root)

    def non_root(self) -> list[DVertex]:
        return [x for k, x in sorted(self.vertices.items()) if not x.root]

    def measure(self) -> int:
        bad = sum(1 for v in self.vertices if (self.is_disc(v) or self.is_annulus(v))
                  and not self.vertices[v].phi_id)
        return 2 * len(self.vertices) + bad

    def piece_kind(self, v: int) -> str:
        x = self.vertices[v]
        if x.root:
            return "root"
        if x.kind == "A":
            return "A"
        if x.special:
            return "special-annular"
        if self.is_disc(v):
            return "D"
        if self.is_annulus(v):
            return "annular"
        return "T"

    def to_networkx(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        for v, x in self.vertices.items():
            g.add_node(v, label=(self.piece_kind(v), x.kind, x.q, x.q_high, x.n, x.chi, x.b))
        for e, (s, d, c) in self.edges.items():
            g.add_edge(s, d, circles=c)
        return g

    def to_json(self) -> dict:
        verts = []
        for v, x in sorted(self.vertices.items()):
            item = {"id": v, "kind": self.piece_kind(v), "q": _pq(x.q)}
            if x.q_high is not None:
                item["q_high"] = _pq(x.q_high)
            if x.kind == "B":
                item.update({"components": x.n, "genus": self.genus(v), "boundary": x.b // x.n,
                             "monodromy_order": x.order})
            verts.append(item)
        return {"vertices": verts,
                "edges": [[s, d, c] for _, (s, d, c) in sorted(self.edges.items())]}

    def to_dot(self) -> str:
        out = ["digraph G {"]
        shape = {"root": "doublecircle", "A": "plaintext", "special-annular": "box", "T": "circle",
                 "D": "circle", "annular": "box"}
        for v, x in sorted(self.vertices.items()):
            k = self.piece_kind(v)
            out.append(f'  n{v} [shape={shape[k]}, label="{x.rate_label()}"];')
        for _, (s, d, c) in sorted(self.edges.items()):
            out.append(f'  n{s} -> n{d} [label="{c}"];')
        out.append("}")
        return "\n".join(out) + "\n"


def _circle_data(circle: Circle, copies: int, points: Sequence[Conj], transverse: int) -> tuple[int, int]:
    """(number of branch points enclosed, parity of the class of the x-loop).

    Only circles centred on the piece centre close up after ``copies`` turns;
    holes around coefficient discs are permuted by the x-loop.  The x-loop runs ``copies`` times around x = 0 along the circle; each
    outside point beta contributes copies * ord(beta - center) to the winding
    of f, each transverse branch copies * multiplicity.
    """
    inside = 0
    wind = Fraction(transverse * copies)
    for beta in points:
        if circle.encloses(beta):
            inside += 1
        else:
            wind += copies * contact_order(beta, circle.center)
    if wind.denominator != 1:
        raise AssertionError("non-integral winding number")
    return inside, int(wind) % 2


def _xi_parity(p: TreePiece, points: Sequence[Conj], transverse: int, order: int) -> int:
    """Parity along the loop of ``order`` turns at a generic interior radius."""
    f0 = principal(p.center)
    wind = Fraction(transverse * order)
    for beta in points:
        o = contact_order(beta, f0)
        wind += order * (p.q if o is INF or o >= p.q else o)
    return int(wind) % 2 if wind.denominator == 1 else 0


def lift_double_cover(
    t: CarrouselTree,
    branch_pieces: Iterable[int] | None = None,
    transverse: Iterable[int] = (),
) -> DecompGraph:
    """Lift the tree through the double cover branched over marked D pieces.

    ``branch_pieces`` are ids of D pieces containing branches (default: all of
    them); ``transverse`` lists multiplicities of marked transverse branches.
    """
    leaves = {p.id for p in t.branch_leaves()}
    if branch_pieces is None:
        branch_pieces = leaves
    branch_pieces = set(branch_pieces)
    for pid in branch_pieces:
        if pid not in leaves:
            raise DomainError(f"piece {pid} is not a D piece containing a branch", kind="bad_marking")
    marked = {n for pid in branch_pieces for n in t.pieces[pid].contains}
    return _lift(t, {b.name for b in t.branches if b.name in marked}, sum(transverse))


def _lift(t: CarrouselTree, marked: set, transverse: int) -> DecompGraph:
    points: list[Conj] = [c for b in t.branches if b.name in marked for c in conjugates(b.terms)]
    g = DecompGraph()
    lifts: dict[int, list[int]] = {}
    tw: dict[int, tuple[int, int]] = {}
    for p in t.pieces:
        c = p.copies
        circles = [p.outer, *p.holes]
        data = [_circle_data(p.outer, c, points, transverse)]
        data += [(sum(1 for beta in points if cc.encloses(beta)), 0) for cc in p.holes]
        tw[p.id] = data[0]
        k = data[0][0] if p.kind == "D" else 0
        odd = [d[0] % 2 for d in data]
        s1_conn = any(odd) or k > 0
        connected = s1_conn or data[0][1] == 1
        chi1 = 2 - len(circles)
        base_order = denominators_lcm([*(x.exp for x in p.center), p.q]) if p.kind != "A" else 1
        order = base_order * (2 if p.kind != "A" and _xi_parity(p, points, transverse, base_order) else 1)
        if connected:
            n = c * (1 if s1_conn else 2)
            chi = 2 * c * chi1 - c * k
            bcount = c * sum(1 if o else 2 for o in odd)
            specs = [(n, chi, bcount)]
        else:
            specs = [(c, c * chi1, c * len(circles))] * 2
        ids = []
        for n, chi, bcount in specs:
            vid = len(g.vertices)
            g.vertices[vid] = DVertex(
                id=vid, kind="A" if p.kind == "A" else "B", q=p.q, q_high=p.q_high,
                root=p.parent is None, n=n, chi=chi, b=bcount,
                phi_id=(order == 1), order=order if p.kind != "A" else 1, source=p.id,
            )
            ids.append(vid)
        lifts[p.id] = ids
        if p.parent is not None:
            inside, w = tw[p.id]
            tori = 1 if (inside % 2 or w) else 2
            total = c * (1 if inside % 2 else 2)
            up, down = lifts[p.parent], ids
            if tori == 1 and (len(up) != 1 or len(down) != 1):
                raise AssertionError("connected torus between disconnected lifts")
            for i in range(tori):
                g.edges[len(g.edges)] = (up[i % len(up)], down[i % len(down)], total // tori)
    return g


# -- reduction ----------------------------------------------------------------


def _designate(g: DecompGraph) -> None:
    for v, x in g.vertices.items():
        if not x.special and x.phi_id and g.is_annulus(v) and not g.out_edges(v):
            x.special = True


def _candidates(g: DecompGraph, v: int):
    """Rule applications whose primary vertex is v, as (rule, data)."""
    x = g.vertices[v]
    if x.special:
        return
    if x.kind == "B" and not x.phi_id and (g.is_disc(v) or g.is_annulus(v)):
        yield 1, v
    outs, ins = g.out_edges(v), g.in_edges(v)
    # rule 2: v = A(q',q'') preceded by A(q,q')
    if x.kind == "A" and len(ins) == 1:
        u = g.edges[ins[0]][0]
        ux = g.vertices[u]
        if ux.kind == "A" and ux.q_high == x.q and len(g.out_edges(u)) == 1:
            yield 2, (u, v)
    # rule 3: annulus v followed by A(q, .)
    if g.is_annulus(v) and x.phi_id and len(ins) == 1 and len(outs) == 1:
        w = g.edges[outs[0]][1]
        if g.vertices[w].kind == "A" and g.vertices[w].q == x.q:
            yield 3, (v, w)
    # rules 4 and 5: v is a terminal disc with identity monodromy
    if g.is_disc(v) and x.phi_id and not outs and len(ins) == 1 and not x.root:
        u = g.edges[ins[0]][0]
        ux = g.vertices[u]
        if ux.kind == "B" and ux.q == x.q and not ux.special:
            yield 4, (u, v)
        if ux.kind == "A" and ux.q_high == x.q and len(g.out_edges(u)) == 1:
            yield 5, (u, v)


def _apply(g: DecompGraph, rule: int, data) -> None:
    if rule == 1:
        g.vertices[data].phi_id = True
        g.vertices[data].order = 1
    elif rule == 2:
        u, v = data
        g.vertices[u].q_high = g.vertices[v].q_high
        (e_in,) = g.in_edges(v)
        del g.edges[e_in]
        for e in g.out_edges(v):
            s, d, c = g.edges[e]
            g.edges[e] = (u, d, c)
        del g.vertices[v]
    elif rule == 3:
        v, w = data
        (e_in,) = g.in_edges(v)
        (e_out,) = g.out_edges(v)
        s, _, c = g.edges[e_in]
        del g.edges[e_out]
        g.edges[e_in] = (s, w, c)
        del g.vertices[v]
    elif rule == 4:
        u, v = data
        (e,) = g.in_edges(v)
        _, _, c = g.edges[e]
        g.vertices[u].chi += g.vertices[v].chi
        g.vertices[u].b -= c
        del g.edges[e]
        del g.vertices[v]
    elif rule == 5:
        u, v = data
        (e,) = g.in_edges(v)
        _, _, c = g.edges[e]
        ux = g.vertices[u]
        g.vertices[u] = DVertex(id=u, kind="B", q=ux.q, root=ux.root, n=c, chi=c, b=c,
                                phi_id=True, order=1, source=ux.source)
        del g.edges[e]
        del g.vertices[v]


def _post_order(g: DecompGraph) -> list[int]:
    seen, out = set(), []

    def visit(v):
        seen.add(v)
        for e in g.out_edges(v):
            d = g.edges[e][1]
            if d not in seen:
                visit(d)
        out.append(v)

    for r in sorted(g.vertices, key=lambda v: (not g.vertices[v].root, v)):
        if r not in seen:
            visit(r)
    return out


def reduce(gdecomp: DecompGraph, order: str = "postorder", seed: int | None = None,
           trace: list | None = None) -> DecompGraph:
    """Apply the rewrite rules until none applies.

    ``order`` picks which applicable rule fires first: ``postorder`` (leaves
    inward, lowest id first), ``reverse`` (highest id first) or ``random``.
    ``trace`` collects (rule, measure) pairs; the measure strictly decreases.
    """
    g = gdecomp.copy()
    rng = random.Random(seed)
    _designate(g)
    m = g.measure()
    while True:
        if order == "postorder":
            seq = _post_order(g)
        elif order == "reverse":
            seq = sorted(g.vertices, reverse=True)
        elif order == "random":
            seq = list(g.vertices)
            rng.shuffle(seq)
        else:
            raise ValueError(order)
        step = None
        for v in seq:
            for cand in _candidates(g, v):
                step = cand
                break
            if step:
                break
        if step is None:
            return g
        _apply(g, *step)
        _designate(g)
        m2 = g.measure()
        if not m2 < m:
            raise AssertionError(f"rule {step[0]} did not decrease the measure")
        if trace is not None:
            trace.append((step[0], m2))
        m = m2


def is_reduced(g: DecompGraph) -> bool:
    return not any(True for v in g.vertices for _ in _candidates(g, v))


def isomorphic(a: DecompGraph, b: DecompGraph) -> bool:
    return nx.is_isomorphic(
        a.to_networkx(), b.to_networkx(),
        node_match=lambda x, y: x["label"] == y["label"],
        edge_match=lambda x, y: sorted(d["circles"] for d in x.values()) == sorted(d["circles"] for d in y.values()),
    )


def minimal_graph(bs: BranchData | Sequence[PuiseuxBranch], cover: Iterable[str] | None = None) -> DecompGraph:
    """truncate -> build -> lift -> reduce.

    ``bs`` is a BranchData (its ``marked`` set is the cover marking) or a list
    of branches with ``cover`` naming the branch points (default: all).
    """
    if not isinstance(bs, BranchData):
        bs = list(bs)
        names = {b.name for b in bs} if cover is None else set(cover)
        bs = BranchData(tuple(bs), (), frozenset(names))
    elif cover is not None:
        bs = replace(bs, marked=frozenset(cover))
    if not bs.branches:
        g = DecompGraph()
        g.vertices[0] = DVertex(id=0, kind="B", q=Fraction(1), root=True, n=1, chi=1, b=1, phi_id=True)
        return g
    tree = build_carrousel(truncate_branches(bs.branches), bs.transverse)
    unknown = set(bs.marked) - {b.name for b in bs.branches} - {t.name for t in bs.transverse}
    if unknown:
        raise DomainError(f"unknown branch-point names {sorted(unknown)}", kind="bad_marking")
    pieces = [tree.leaf_of(n).id for n in sorted(bs.marked) if n in {b.name for b in bs.branches}]
    trans = [t.mult for t in bs.transverse if t.name in bs.marked]
    return reduce(lift_double_cover(tree, pieces, trans))


def thin_summary(g: DecompGraph) -> list[tuple[str, Fraction]]:
    """(kind, rate) of every non-root B piece of a reduced graph, sorted."""
    out = []
    for v, x in sorted(g.vertices.items()):
        if x.root or x.kind == "A":
            continue
        out.append((g.piece_kind(v), x.q))
    return sorted(out)


# -- text format --------------------------------------------------------------

_EXP = re.compile(r"^\d+(/\d+)?$")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-']*$")


def parse_branches(text: str) -> BranchData:
    """Parse ``branch``/``term``/``transverse``/``branch-point`` lines."""
    branches: list[tuple[str, list[Term]]] = []
    transverse: list[TransverseBranch] = []
    marked: list[tuple[str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", line)]
        if not toks:
            continue
        head, col = toks[0]
        indented = line[:1].isspace()
        if head == "branch":
            if len(toks) != 2 or not _NAME.match(toks[1][0]):
                raise GraphParseError("expected 'branch <name>'", lineno, col)
            branches.append((toks[1][0], []))
        elif head == "term":
            if not indented:
                raise GraphParseError("term lines must be indented under a branch", lineno, col)
            if not branches:
                raise GraphParseError("term before any branch", lineno, col)
            kv = {}
            for tok, c in toks[1:]:
                k, _, v = tok.partition("=")
                if k not in ("exp", "coeff") or not v or k in kv:
                    raise GraphParseError(f"unexpected {tok!r}", lineno, c)
                if k == "exp" and not _EXP.match(v):
                    raise GraphParseError(f"bad exponent {v!r}", lineno, c + 4)
                kv[k] = v
            if set(kv) != {"exp", "coeff"}:
                raise GraphParseError("term needs exp=<p>/<q> and coeff=<token>", lineno, col)
            exp = Fraction(kv["exp"])
            branches[-1][1].append(Term(exp, kv["coeff"]))
        elif head == "transverse":
            if len(toks) not in (2, 3) or not _NAME.match(toks[1][0]):
                raise GraphParseError("expected 'transverse <name> [mult=<n>]'", lineno, col)
            mult = 1
            if len(toks) == 3:
                k, _, v = toks[2][0].partition("=")
                if k != "mult" or not v.isdigit() or int(v) < 1:
                    raise GraphParseError("expected mult=<positive int>", lineno, toks[2][1])
                mult = int(v)
            transverse.append(TransverseBranch(toks[1][0], mult))
        elif head == "branch-point":
            if len(toks) != 2:
                raise GraphParseError("expected 'branch-point <branch-name>'", lineno, col)
            marked.append((toks[1][0], lineno, toks[1][1]))
        else:
            raise GraphParseError(f"unknown directive {head!r}", lineno, col)
    names = [n for n, _ in branches] + [t.name for t in transverse]
    if len(set(names)) != len(names):
        raise GraphParseError("duplicate branch name", 1, 1, kind="duplicate_branch")
    for n, lineno, col in marked:
        if n not in names:
            raise GraphParseError(f"branch-point names unknown branch {n!r}", lineno, col, kind="dangling_reference")
    bs = tuple(PuiseuxBranch(n, tuple(ts)) for n, ts in branches)
    return BranchData(bs, tuple(transverse), frozenset(n for n, _, _ in marked))


def serialize_branches(d: BranchData) -> str:
    lines = []
    for b in d.branches:
        lines.append(f"branch {b.name}")
        for t in b.terms:
            lines.append(f"  term exp={t.exp.numerator}/{t.exp.denominator} coeff={t.token}")
    for t in d.transverse:
        lines.append(f"transverse {t.name}" + (f" mult={t.mult}" if t.mult != 1 else ""))
    for n in sorted(d.marked):
        lines.append(f"branch-point {n}")
    return "\n".join(lines) + "\n"
