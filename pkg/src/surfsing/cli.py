"""Command-line front end.

Exit status 0 on success, 1 on domain errors (structured JSON on stderr),
2 on usage errors.  ``-`` reads from stdin.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from . import carrousel as cr
from . import cycles
from . import families as fam
from . import fastloop as fl
from .errors import DomainError
from .graph_core import (
    POLAR,
    Z1,
    PlumbingGraph,
    parse_graph,
    require_negative_definite,
    serialize_graph,
    to_dot,
    validate,
)
from .rates import build_rate_graph, fraction_str, hironaka_number, parse_fraction, validate_rate_graph
from .thickthin import classify_nodes, decompose, is_node


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _graph(path: str) -> PlumbingGraph:
    return parse_graph(_read(path))


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _decomp_summary(dec) -> str:
    return f"{len(dec.thick)} thick, {len(dec.thin)} thin"


# -- subcommands --------------------------------------------------------------


def cmd_validate(a) -> str:
    g = _graph(a.file)
    problems = validate(g)
    require_negative_definite(g)
    if problems:
        raise DomainError("; ".join(problems), kind="invalid_graph")
    return _json({"valid": True, "vertices": len(g.vertices), "edges": len(g.edges),
                  "negative_definite": True})


def _labels(g: PlumbingGraph, wanted) -> list[str]:
    return list(wanted) if wanted else list(g.labels())


def cmd_cycles(a) -> str:
    g = _graph(a.file)
    vecs = [cycles.multiplicities(g, l) for l in _labels(g, a.label)]
    if a.fundamental:
        vecs.append(cycles.fundamental_cycle(g))
    if a.gap is not None:
        if len(vecs) < 2:
            raise DomainError("--gap needs at least two functions", kind="empty_input")
        bound = cycles.blowup_lower_bound(vecs, a.gap)
        if a.table:
            return f"blow-up lower bound at {a.gap}: {bound}\n"
        return _json({"vertex": a.gap, "values": {v.label: v[a.gap] for v in vecs}, "lower_bound": bound})
    if a.table:
        return cycles.format_table(vecs)
    return _json({"order": list(g.ids), "vectors": {v.label: list(v.row()) for v in vecs}})


def cmd_decompose(a) -> str:
    g = _graph(a.file)
    require_negative_definite(g)
    sep, dec = decompose(g)
    if a.dot:
        filled = [p.lnode for p in dec.thick]
        return to_dot(sep, filled=filled, boxes=[c.vertices for c in dec.thin])
    out = dec.to_json()
    out["summary"] = _decomp_summary(dec)
    kinds = classify_nodes(sep).kinds
    out["nodes"] = {str(v): k for v, k in kinds.items() if is_node(sep, v)}
    if sep != g:
        out["separated_graph"] = serialize_graph(sep)
    return _json(out)


def cmd_rates(a) -> str:
    g = _graph(a.file)
    sep, _ = decompose(g)
    verts = sep.ids if a.all else [v for v in sep.ids if is_node(sep, v)]
    rates = {v: hironaka_number(sep, v, a.base, a.aux) for v in verts}
    if a.table:
        return "".join(f"{v}: {fraction_str(q)}\n" for v, q in rates.items())
    return _json({"base": a.base, "aux": a.aux, "rates": {str(v): fraction_str(q) for v, q in rates.items()}})


def _rate_overrides(items) -> dict[int, Fraction]:
    out = {}
    for item in items or ():
        v, sep, q = item.partition("=")
        if not sep or not v.strip().isdigit():
            raise UsageError(f"--rate expects <vertex>=<p/q>, got {item!r}")
        out[int(v)] = parse_fraction(q)
    return out


def cmd_gamma0(a) -> str:
    g = _graph(a.file)
    require_negative_definite(g)
    sep, dec = decompose(g)
    rates = _rate_overrides(a.rate)
    lnodes = {p.lnode for p in dec.thick}
    need = [v for v in sep.ids if is_node(sep, v) and v not in lnodes]
    need += sorted(sep.arrow_counts(POLAR))
    for v in need:
        if v not in rates and a.aux:
            rates[v] = hironaka_number(sep, v, a.base, a.aux)
    rg = build_rate_graph(sep, dec, rates)
    if a.dot:
        return rg.to_dot()
    out = rg.to_json()
    out["violations"] = validate_rate_graph(rg)
    return _json(out)


def cmd_carrousel(a) -> str:
    data = cr.parse_branches(_read(a.file))
    if not a.reduce:
        tree = cr.build_carrousel(cr.truncate_branches(data.branches), data.transverse)
        return _json(tree.to_json()) if a.json else tree.render()
    g = cr.minimal_graph(data)
    return g.to_dot() if a.dot else _json(g.to_json())


def cmd_cf(a) -> str:
    if a.action == "eval":
        if not a.values:
            raise UsageError("cf eval needs entries")
        q = fl.cf_eval([int(x) for x in a.values])
        return _json({"p": q.numerator, "q": q.denominator, "value": fraction_str(q)})
    if len(a.values) != 2:
        raise UsageError(f"cf {a.action} needs p and q")
    p, q = (int(x) for x in a.values)
    if a.action == "expand":
        return _json({"p": p, "q": q, "entries": fl.hj_expansion(p, q)})
    return serialize_graph(fl.hj_bamboo(p, q, decorate=not a.bare))


def cmd_fastloop(a) -> str:
    g = _graph(a.file)
    node, first = a.cut
    if a.action == "check":
        ok = fl.lens_fastloop_check(g, (node, first))
        return _json({"cut": [node, first], "fast_loop": ok})
    m = cycles.multiplicities(g, a.label).values
    lam = fl.cut_lambda(g, node, first, m)
    return _json({"cut": [node, first], "lambda": lam, "nontrivial": lam != 0})


def cmd_family(a) -> str:
    params = list(a.params)
    if a.id == "briancon-speder":
        params = [a.t_zero]
    inst = fam.generate(fam.FamilySpec(a.id, tuple(params)))
    if a.emit == "graph":
        return serialize_graph(inst.graph)
    return _json(inst.expected())


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="surfsing", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"surfsing {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a graph file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("cycles", help="multiplicity vectors of arrow labels")
    s.add_argument("file")
    s.add_argument("--label", action="append", help="label or generic combination a+b (repeatable)")
    s.add_argument("--fundamental", action="store_true", help="also print the fundamental cycle")
    s.add_argument("--gap", type=int, metavar="VERTEX", help="blow-up lower bound at VERTEX")
    s.add_argument("--table", action="store_true")
    s.set_defaults(func=cmd_cycles)

    s = sub.add_parser("decompose", help="thick-thin decomposition")
    s.add_argument("file")
    s.add_argument("--dot", action="store_true")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("rates", help="Hironaka numbers at nodes")
    s.add_argument("file")
    s.add_argument("--base", default=Z1)
    s.add_argument("--aux", required=True)
    s.add_argument("--all", action="store_true", help="every vertex, not only nodes")
    s.add_argument("--table", action="store_true")
    s.set_defaults(func=cmd_rates)

    s = sub.add_parser("gamma0", help="rate-decorated classification graph")
    s.add_argument("file")
    s.add_argument("--base", default=Z1)
    s.add_argument("--aux", help="label used for Hironaka rates at T-nodes and polar curves")
    s.add_argument("--rate", action="append", metavar="V=P/Q", help="explicit rate (repeatable)")
    s.add_argument("--dot", action="store_true")
    s.set_defaults(func=cmd_gamma0)

    s = sub.add_parser("carrousel", help="carrousel tree of discriminant branches")
    s.add_argument("file")
    s.add_argument("--reduce", action="store_true", help="lift and reduce to the minimal graph")
    s.add_argument("--json", action="store_true")
    s.add_argument("--dot", action="store_true")
    s.set_defaults(func=cmd_carrousel)

    s = sub.add_parser("cf", help="Hirzebruch-Jung continued fractions")
    s.add_argument("action", choices=("eval", "expand", "bamboo"))
    s.add_argument("values", nargs="*")
    s.add_argument("--bare", action="store_true", help="bamboo without z1 arrows")
    s.set_defaults(func=cmd_cf)

    s = sub.add_parser("fastloop", help="core criterion at a cut edge")
    s.add_argument("action", choices=("check", "lambda"))
    s.add_argument("file")
    s.add_argument("--cut", nargs=2, type=int, required=True, metavar=("NODE", "FIRST"))
    s.add_argument("--label", default=Z1)
    s.set_defaults(func=cmd_fastloop)

    s = sub.add_parser("family", help="emit an example family")
    s.add_argument("id", choices=fam.FAMILIES)
    s.add_argument("params", nargs="*", type=int)
    s.add_argument("--t-zero", action="store_true", help="Briancon-Speder special member")
    s.add_argument("--emit", choices=("graph", "expected"), default="graph")
    s.set_defaults(func=cmd_family)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"surfsing: error: {e}", file=sys.stderr)
        return 2
    except DomainError as e:
        sys.stderr.write(_json({"error": e.to_dict()}))
        return 1
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
