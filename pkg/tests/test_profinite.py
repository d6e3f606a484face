import numpy as np
import pytest

from profhom.abelian import AbHom, FinAb
from profhom.bar import group_homology
from profhom.errors import DepthMismatch, GroupMismatch, NotEquivariant
from profhom.generators import random_module
from profhom.gmod import ModuleTower, make_module, trivial_module
from profhom.groups import (cyclic_group, cyclic_p_tower, dihedral_group,
                            quaternion_group, symmetric_group)
from profhom.profinite import (constant_pair, continuous_homology, homology_tower,
                               trivial_coefficients, validate_tower_pair)


def test_trivial_coefficients_validate():
    pair = trivial_coefficients(cyclic_p_tower(2, 4), [2])
    assert pair.depth == 4


def test_wrong_quotients():
    gt = cyclic_p_tower(2, 2)
    mods = [trivial_module(cyclic_group(3), [2])] * 3
    mt = ModuleTower(tuple(mods), tuple(AbHom.identity(mods[0].abgroup) for _ in range(2)))
    with pytest.raises(GroupMismatch):
        validate_tower_pair(gt, mt)


def test_depth_mismatch():
    gt = cyclic_p_tower(2, 2)
    mods = [trivial_module(G, [2]) for G in gt.groups[:2]]
    mt = ModuleTower(tuple(mods), (AbHom.identity(mods[0].abgroup),))
    with pytest.raises(DepthMismatch):
        validate_tower_pair(gt, mt)


def test_non_equivariant_transition_has_witness():
    gt = cyclic_p_tower(2, 2)
    mods = (trivial_module(gt.groups[0], [4]), trivial_module(gt.groups[1], [4]),
            make_module(gt.groups[2], [4], {1: [[3]]}))
    maps = (AbHom.identity(mods[0].abgroup),) * 2
    with pytest.raises(NotEquivariant) as e:
        validate_tower_pair(gt, ModuleTower(mods, maps))
    assert e.value.witness[0] == 1


def test_degree_zero_is_coinvariants_tower():
    pair = trivial_coefficients(cyclic_p_tower(2, 3), [2])
    t = homology_tower(pair, 0)
    assert all(H == FinAb([2]) for H in t.objects)


def test_z2_tower_degree_one_levels():
    t = homology_tower(trivial_coefficients(cyclic_p_tower(2, 4), [2]), 1)
    assert [str(H) for H in t.objects] == ["0", "Z/2", "Z/2", "Z/2", "Z/2"]


def test_constant_tower_gives_identity_transitions():
    pair = constant_pair(trivial_module(symmetric_group(3), [2]), 3)
    t = homology_tower(pair, 2)
    assert all(f == AbHom.identity(f.source) for f in t.maps)


@pytest.mark.parametrize("G", [cyclic_group(2), symmetric_group(3), dihedral_group(4),
                               quaternion_group()], ids=["Z2", "S3", "D8", "Q8"])
def test_constant_tower_recovers_group_homology(G):
    rng = np.random.default_rng(G.order)
    for M in (trivial_module(G, [2]), random_module(rng, G, 16)):
        pair = constant_pair(M, 2)
        for p in range(4):
            res = continuous_homology(pair, p)
            assert res.value == group_homology(M, p)
            assert res.lim.kind == "stable"


def test_z2_adic_golden_values():
    pair = trivial_coefficients(cyclic_p_tower(2, 4), [2])
    vals = [continuous_homology(pair, p) for p in range(4)]
    assert vals[0].lim.kind == "stable" and vals[0].value == FinAb([2])
    assert vals[1].lim.kind == "stable" and vals[1].value == FinAb([2])
    # the transitions are zero maps in degrees >= 2: H^c vanishes, certified
    # by the eventual images even though no transition is an isomorphism
    assert vals[2].value == FinAb() and vals[3].value == FinAb()
    assert all(v.lim1_report.is_trivial() for v in vals)


def test_stable_answers_are_monotone_in_depth():
    gt = cyclic_p_tower(3, 5)
    for p in range(3):
        shallow = continuous_homology(trivial_coefficients(gt.truncate(3), [3]), p)
        deep = continuous_homology(trivial_coefficients(gt, [3]), p)
        if shallow.value is not None:
            assert deep.value == shallow.value


def test_two_adic_coefficients_do_not_stabilize():
    # A_i = Z/2^i with reduction maps: H^c_0 is the 2-adic integers, a pro-object
    gt = cyclic_p_tower(2, 4, start=1)
    mods = tuple(trivial_module(G, [G.order]) for G in gt.groups)
    maps = tuple(AbHom(mods[i + 1].abgroup, mods[i].abgroup, [[1]]) for i in range(4))
    res = continuous_homology(validate_tower_pair(gt, ModuleTower(mods, maps)), 0)
    assert res.value is None and res.warning is not None
