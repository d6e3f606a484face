import pytest
from hypothesis import given, settings, strategies as st

from profhom.abelian import AbGroup, AbHom, FinAb
from profhom.bar import group_homology
from profhom.errors import CompositionNonzero, ValidationError
from profhom.generators import (random_bicomplex, random_module, random_orbit_input, rng_for,
                                staircase_bicomplex)
from profhom.gmod import ModuleTower, make_module, trivial_module
from profhom.groups import constant_group_tower, cyclic_group, cyclic_p_tower, symmetric_group
from profhom.orbit import (Bicomplex, EquivariantComplex, OrbitInput, em_input,
                           em_orbit_homology, orbit_bicomplex, orbit_homology, ss_pages,
                           thicken, total_homology)
from profhom.profinite import constant_pair, continuous_homology, trivial_coefficients


def Z(m):
    return AbGroup((m,))


def test_bicomplex_rejects_dh_squared():
    one = AbHom(Z(2), Z(2), [[1]])
    with pytest.raises(CompositionNonzero):
        Bicomplex({(0, 0): Z(2), (1, 0): Z(2), (2, 0): Z(2)}, dh={(1, 0): one, (2, 0): one})


def test_bicomplex_rejects_commuting_square():
    # dh dv + dv dh = 2 on Z/4, not zero
    one = AbHom(Z(4), Z(4), [[1]])
    ents = {(a, b): Z(4) for a in range(2) for b in range(2)}
    with pytest.raises(CompositionNonzero):
        Bicomplex(ents, dh={(1, 1): one, (1, 0): one}, dv={(1, 1): one, (0, 1): one})


def test_bicomplex_rejects_wrong_shape():
    with pytest.raises(ValidationError):
        Bicomplex({(0, 0): Z(2), (1, 0): Z(3)}, dh={(1, 0): AbHom(Z(2), Z(2), [[1]])})


def test_total_homology_examples():
    two = AbHom(Z(4), Z(4), [[2]])
    B = Bicomplex({(0, 0): Z(4), (1, 0): Z(4)}, dh={(1, 0): two})
    assert [str(total_homology(B)[n]) for n in range(2)] == ["Z/2", "Z/2"]
    B = Bicomplex({(1, 1): Z(3)})
    H = total_homology(B)
    assert [str(H[n]) for n in range(3)] == ["0", "0", "Z/3"]


def test_total_homology_of_anticommuting_square_is_zero():
    one = AbHom(Z(5), Z(5), [[1]])
    neg = AbHom(Z(5), Z(5), [[-1]])
    ents = {(a, b): Z(5) for a in range(2) for b in range(2)}
    B = Bicomplex(ents, dh={(1, 1): one, (1, 0): one}, dv={(1, 1): one, (0, 1): neg})
    H = total_homology(B)
    assert all(H[n] == FinAb() for n in range(3))


def test_one_row_collapses_at_two():
    two = AbHom(Z(4), Z(4), [[2]])
    B = Bicomplex({(0, 0): Z(4), (1, 0): Z(4), (2, 0): Z(4)}, dh={(1, 0): two, (2, 0): two})
    ss = ss_pages(B)
    assert ss.collapse_page == 2 and ss.converges and not ss.page_checks


def test_one_column_collapses_at_two():
    three = AbHom(Z(9), Z(9), [[3]])
    B = Bicomplex({(0, 0): Z(9), (0, 1): Z(9)}, dv={(0, 1): three})
    ss = ss_pages(B)
    assert ss.collapse_page == 2 and ss.converges
    assert ss.pages[2][(0, 0)] == FinAb([3])


def test_staircase_has_nonzero_d2():
    ss = ss_pages(staircase_bicomplex(2))
    assert ss.collapse_page == 3
    assert ss.pages[2][(2, 0)] == FinAb([2]) and ss.pages[2][(0, 1)] == FinAb([2])
    assert all(E == FinAb() for E in ss.pages[3].values())
    assert ss.verdict() == "collapses at E_3" and ss.converges


@settings(max_examples=25)
@given(st.integers(0, 2 ** 32 - 1))
def test_random_bicomplexes_converge(seed):
    B = random_bicomplex(rng_for(seed), 3, 3)
    ss = ss_pages(B, r_max=3)
    assert ss.converges and not ss.page_checks


def test_em_bicomplex_is_one_row_of_bar_chains():
    A = trivial_module(cyclic_group(2), [2])
    inp = em_input(constant_pair(A, 1))
    ob = orbit_bicomplex(inp, 1, 3, method="unnormalized")
    B = ob.bicomplex
    assert B.Q == 0
    assert [B.entries[(p, 0)].orders for p in range(4)] == [(2,) * 2 ** p for p in range(4)]
    assert ob.stability.stable


def test_trivial_group_bicomplex_is_the_complex():
    G = cyclic_group(1)
    M = trivial_module(G, [6])
    C = EquivariantComplex((M, M), (AbHom(M.abgroup, M.abgroup, [[2]]),))
    gt = constant_group_tower(G, 2)
    inp = OrbitInput(gt, (C,) * 3, ((AbHom.identity(M.abgroup),) * 2,) * 2)
    res = orbit_homology(inp, 2)
    assert res.values[:2] == [FinAb([2]), FinAb([2])]


def test_classical_recovery_constant_tower():
    G = symmetric_group(3)
    M = random_module(rng_for(5), G, 16)
    inp = em_input(constant_pair(M, 2))
    res = orbit_homology(inp, 3)
    assert res.values == [group_homology(M, n) for n in range(4)]


def test_acyclic_input_has_zero_orbit_homology():
    gt = cyclic_p_tower(2, 2)
    inp = random_orbit_input(rng_for(3), gt, length=2, pieces=3, acyclic=True)
    res = orbit_homology(inp, 2)
    assert all(v == FinAb() for v in res.values)


@pytest.mark.parametrize("seed", range(4))
def test_thickening_preserves_orbit_homology(seed):
    rng = rng_for(seed)
    gt = cyclic_p_tower(2, 3)
    inp = random_orbit_input(rng, gt, length=1, pieces=2)
    q = int(rng.integers(inp.length + 1))
    a = orbit_homology(inp, 2)
    b = orbit_homology(thicken(inp, q), 2)
    assert [x.certified for x in a.lims] == [x.certified for x in b.lims]
    assert [x.kind for x in a.lims] == [x.kind for x in b.lims]


def test_em_orbit_on_two_adic_tower():
    pair = trivial_coefficients(cyclic_p_tower(2, 4), [2])
    res = em_orbit_homology(pair.groups, pair.modules, 3)
    assert res.values == [FinAb([2]), FinAb([2]), FinAb(), FinAb()]
    assert res.collapse_page == 2 and res.orbit.e2_verdict == "E2 agrees"


def test_em_orbit_trivial_group_gives_lim_in_degree_zero():
    gt = constant_group_tower(cyclic_group(1), 2)
    mods = tuple(trivial_module(G, [4]) for G in gt.groups)
    maps = (AbHom(mods[0].abgroup, mods[0].abgroup, [[1]]),) * 2
    res = em_orbit_homology(gt, ModuleTower(mods, maps), 2)
    assert res.values == [FinAb([4]), FinAb(), FinAb()]


def test_e2_per_level_matches_bar_homology():
    gt = cyclic_p_tower(3, 2)
    inp = random_orbit_input(rng_for(11), gt, length=1, pieces=2)
    res = orbit_homology(inp, 2)
    for e in res.e2:
        assert e.levels == e.levels_bar and e.agree


def test_orbit_matches_continuous_for_nontrivial_action():
    G = cyclic_group(4)
    M = make_module(G, [4], {G.cyclic_generator: [[3]]})
    pair = constant_pair(M, 2)
    res = em_orbit_homology(pair.groups, pair.modules, 3)
    assert res.values == [continuous_homology(pair, n).value for n in range(4)]
