"""Multiplicity rows, Hironaka numbers and Gamma0 for the superisolated example."""

from surfsing import families as fam
from surfsing.cycles import format_table, multiplicities
from surfsing.rates import hironaka_numbers


def main() -> None:
    inst = fam.family_superisolated()
    g = inst.graph
    print(format_table([multiplicities(g, l) for l in ("z1", "x", "y", "x+y")]))
    h = hironaka_numbers(g, "z1", "x+y")
    print("Hironaka numbers on the string 3..7:", ", ".join(str(h[v]) for v in range(3, 8)))
    res = fam.run_pipeline(inst)
    print(res.gamma0.to_dot())


if __name__ == "__main__":
    main()
