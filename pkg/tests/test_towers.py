import numpy as np
import pytest
from hypothesis import given, strategies as st

from profhom.abelian import AbGroup, AbHom, FinAb
from profhom.errors import Indeterminate, NotStabilized
from profhom.generators import random_finite_tower
from profhom.towers import Tower, constant_tower, ml_check, tower_lim, tower_lim1


def chain(orders, mats):
    objs = [AbGroup(o) for o in orders]
    maps = [AbHom(objs[i + 1], objs[i], m) for i, m in enumerate(mats)]
    return Tower(tuple(objs), tuple(maps))


def test_constant_tower_is_stable():
    L = tower_lim(constant_tower(FinAb([2]), 4))
    assert L.kind == "stable" and L.value == FinAb([2]) and L.stable_from == 0


def test_two_adic_tower_is_pro():
    t = chain([(2 ** (i + 1),) for i in range(6)], [[[1]]] * 5)
    L = tower_lim(t)
    assert L.kind == "pro" and L.non_stabilized and L.certified is None


def test_zero_transitions_have_eventual_image_zero():
    t = chain([(2,)] * 5, [[[0]]] * 4)
    L = tower_lim(t)
    assert L.kind == "pro"
    assert L.effective_lim == FinAb.trivial() and L.certified == FinAb.trivial()


def test_window_is_configurable():
    # isomorphisms only over the last transition
    t = chain([(2,), (4,), (4,), (4,)], [[[1]], [[3]], [[1]]])
    assert tower_lim(t, window=1).kind == "stable"
    assert tower_lim(t, window=2).kind == "stable"
    t2 = chain([(2,), (4,), (8,), (8,)], [[[1]], [[1]], [[1]]])
    assert tower_lim(t2, window=1).value == FinAb([8])
    assert tower_lim(t2, window=2).kind == "pro"


def test_declared_stabilization_is_checked():
    objs = (AbGroup((2,)), AbGroup((4,)))
    with pytest.raises(NotStabilized):
        Tower(objs, (AbHom(objs[1], objs[0], [[1]]),), stabilization=0)


def test_finite_tower_is_ml_with_zero_lim1():
    t = chain([(2,)] * 4, [[[0]]] * 3)
    assert ml_check(t).holds is True
    assert tower_lim1(t).is_trivial()


def test_times_two_on_z_fails_ml():
    t = chain([(0,)] * 5, [[[2]]] * 4)
    ml = ml_check(t)
    assert ml.holds is False
    with pytest.raises(Indeterminate):
        tower_lim1(t)


def test_constant_z_is_ml():
    t = constant_tower(FinAb([0]), 3)
    assert ml_check(t).holds is True and tower_lim1(t).is_trivial()


@given(st.integers(0, 2 ** 32 - 1), st.integers(0, 6))
def test_lim1_vanishes_on_random_finite_towers(seed, depth):
    t = random_finite_tower(np.random.default_rng(seed), depth)
    assert ml_check(t).holds is True
    assert tower_lim1(t).is_trivial()


@given(st.integers(0, 2 ** 32 - 1))
def test_stable_answers_survive_deeper_truncation(seed):
    rng = np.random.default_rng(seed)
    t = random_finite_tower(rng, 4)
    # extend with two identity levels; a stable limit must not change
    top = t.objects[-1]
    ext = Tower(t.objects + (top, top), t.maps + (AbHom.identity(top),) * 2)
    a, b = tower_lim(t), tower_lim(ext)
    if a.kind == "stable":
        assert b.kind == "stable" and a.value == b.value
