"""Reduce random lifted carrousels under three rule orders and compare."""

import argparse
import random
from collections import Counter
from fractions import Fraction

from surfsing import carrousel as cr

POOL = [Fraction(x) for x in ("3/2", "4/3", "5/3", "7/4", "2", "5/2", "7/3", "3", "11/6", "13/6")]


def random_lift(rng: random.Random) -> cr.DecompGraph:
    while True:
        bs = []
        for i in range(rng.randint(1, 5)):
            exps = sorted(rng.sample(POOL, rng.randint(0, 3)))
            bs.append(cr.PuiseuxBranch(f"b{i}", tuple(cr.Term(e, rng.choice("ab")) for e in exps)))
        if len({b.terms for b in bs}) == len(bs):
            break
    trans = (cr.TransverseBranch("t", rng.randint(1, 3)),) if rng.random() < 0.3 else ()
    tree = cr.build_carrousel(cr.truncate_branches(bs), trans)
    pieces = [p.id for p in tree.branch_leaves() if rng.random() < 0.7]
    return cr.lift_double_cover(tree, pieces, [t.mult for t in trans if rng.random() < 0.5])


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--graphs", type=int, default=300)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    agree, steps, kinds = 0, Counter(), Counter()
    for i in range(args.graphs):
        g = random_lift(rng)
        trace: list = []
        a = cr.reduce(g, trace=trace)
        steps.update(r for r, _ in trace)
        kinds.update(a.piece_kind(v) for v in a.vertices)
        agree += cr.isomorphic(a, cr.reduce(g, order="reverse")) and cr.isomorphic(
            a, cr.reduce(g, order="random", seed=i))
    print(f"isomorphic under all orders: {agree}/{args.graphs}")
    print("rule applications:", dict(sorted(steps.items())))
    print("reduced piece kinds:", dict(sorted(kinds.items())))


if __name__ == "__main__":
    main()
