"""Print thick/thin counts and rates for the simple singularities."""

import time

from surfsing import families as fam


def main() -> None:
    t = time.perf_counter()
    print(f"{'family':<8} {'thick':>5} {'thin':>4} {'conical':>7}  rates")
    for inst in fam.table_sweep():
        res = fam.run_pipeline(inst)
        d = res.decomposition
        rates = ", ".join(f"{k}={q}" for k, q in fam.observed_rates(res))
        print(f"{inst.name:<8} {len(d.thick):>5} {len(d.thin):>4} {str(d.conical):>7}  {rates}")
    print(f"elapsed {1000 * (time.perf_counter() - t):.1f} ms")


if __name__ == "__main__":
    main()
