"""Time group homology under each bar-complex model.

The literal complexes grow like |G|^p; the Morse model (cyclic groups)
has one cell per degree and elimination shrinks the normalized complex.
"""
import argparse
import time

from profhom.bar import group_homology
from profhom.errors import NotCyclic, SizeOverflow
from profhom.generators import random_module, rng_for, small_groups
from profhom.reduction import METHODS, clear_cache


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--max-order", type=int, default=8)
    ap.add_argument("--degree", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = rng_for(args.seed)
    methods = [m for m in METHODS if m != "auto"]
    print(f"{'group':<14}{'module':<14}" + "".join(f"{m:>14}" for m in methods))
    for G in small_groups(args.max_order):
        M = random_module(rng, G, 16)
        row = []
        for m in methods:
            clear_cache()
            t0 = time.perf_counter()
            try:
                group_homology(M, args.degree, m)
                row.append(f"{time.perf_counter() - t0:>13.3f}s")
            except (NotCyclic, SizeOverflow, ValueError):
                row.append(f"{'-':>14}")
        name = str(M.abgroup.orders)
        print(f"{G.name:<14}{name:<14}" + "".join(row))


if __name__ == "__main__":
    main()
