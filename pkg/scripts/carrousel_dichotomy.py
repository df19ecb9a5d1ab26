"""Sample irreducible discriminants of z^2 = f and tally the last piece type.

The last characteristic exponent gives a special annulus exactly when its
denominator jump is 2.
"""

import argparse
import random
from collections import Counter
from fractions import Fraction

from surfsing import carrousel as cr


def sample(rng: random.Random):
    terms, pairs, e, den = [], [], Fraction(1), 1
    for _ in range(rng.randint(1, 3)):
        r = rng.choice([2, 3, 4, 5])
        nd = den * r
        num = int(e * nd) + 1 + rng.randint(0, nd)
        while Fraction(num, nd).denominator != nd:
            num += 1
        e, den = Fraction(num, nd), nd
        terms.append(cr.Term(e, rng.choice("abc")))
        pairs.append((e, r))
    return cr.PuiseuxBranch("f", tuple(terms)), pairs


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    tally = Counter()
    for _ in range(args.samples):
        b, pairs = sample(rng)
        last, r = pairs[-1]
        g = cr.minimal_graph(cr.BranchData.double_cover([b]))
        kinds = {k for k, q in cr.thin_summary(g) if q == last}
        tally[(r == 2, tuple(sorted(kinds)))] += 1
    for (is_two, kinds), n in sorted(tally.items()):
        print(f"last jump {'= 2' if is_two else '!= 2'}: {', '.join(kinds):<16} {n}")


if __name__ == "__main__":
    main()
