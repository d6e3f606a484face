"""Continuous and orbit homology of a few standard towers.

Prints, per tower and degree, the finite levels H_p(G/N_i, A_i), the
limit, and whether orbit homology of the Eilenberg-Mac Lane input agrees.
"""
import argparse

from profhom.abelian import AbHom
from profhom.gmod import ModuleTower, make_module, trivial_module
from profhom.groups import cyclic_p_tower, dihedral_group
from profhom.orbit import em_orbit_homology
from profhom.profinite import constant_pair, trivial_coefficients


def negation_tower(depth: int):
    # Z/2^(i+1) acting on Z/4 through x -> -x
    gt = cyclic_p_tower(2, depth, start=1)
    mods = tuple(make_module(G, [4], {G.cyclic_generator: [[3]]}) for G in gt.groups)
    maps = tuple(AbHom.identity(mods[0].abgroup) for _ in range(depth))
    return gt, ModuleTower(mods, maps)


def towers(depth: int):
    for p in (2, 3):
        pair = trivial_coefficients(cyclic_p_tower(p, depth), [p])
        yield f"Z/{p}^i, trivial Z/{p}", pair.groups, pair.modules
    yield "Z/2^i on Z/4 by negation", *negation_tower(depth)
    pair = constant_pair(trivial_module(dihedral_group(4), [2]), 2)
    yield "constant D8, trivial Z/2", pair.groups, pair.modules


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--degrees", type=int, default=3, help="top degree")
    args = ap.parse_args()
    for name, gt, mt in towers(args.depth):
        print(name)
        orbit = em_orbit_homology(gt, mt, args.degrees)
        for p in range(args.degrees + 1):
            ch = orbit.continuous[p]
            levels = ", ".join(str(H) for H in ch.tower.objects)
            same = orbit.orbit.lims[p].certified == ch.value
            print(f"  p={p}: [{levels}] -> {ch.describe()}; orbit agrees: {same}")


if __name__ == "__main__":
    main()
