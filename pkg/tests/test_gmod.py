import numpy as np
import pytest
from hypothesis import given, strategies as st

from profhom.abelian import FinAb
from profhom.errors import ActionNotInvertible, GroupMismatch, ModuleNotFinite
from profhom.generators import random_module, small_groups
from profhom.gmod import coinvariants, make_module, restrict_along, trivial_module
from profhom.groups import cyclic_group, cyclic_p_tower, identity_quotient


def test_sign_action_on_z4():
    M = make_module(cyclic_group(2), [4], {1: [[3]]})
    assert M.action[1].tolist() == [[3]]


def test_times_two_is_not_invertible():
    with pytest.raises(ActionNotInvertible):
        make_module(cyclic_group(2), [4], {1: [[2]]})


def test_trivial_module_over_z3():
    M = make_module(cyclic_group(3), [2], {1: [[1]]})
    assert M.is_trivial()


def test_infinite_coefficients_rejected():
    with pytest.raises(ModuleNotFinite):
        trivial_module(cyclic_group(2), [0])


def test_coinvariants_examples():
    assert coinvariants(trivial_module(cyclic_group(2), [4])) == FinAb([4])
    assert coinvariants(make_module(cyclic_group(2), [4], {1: [[3]]})) == FinAb([2])
    perm = [[0, 0, 1], [1, 0, 0], [0, 1, 0]]
    assert coinvariants(make_module(cyclic_group(3), [2, 2, 2], {1: perm})) == FinAb([2])


def test_restrict_examples():
    t = cyclic_p_tower(2, 2)
    q = t.maps[1]                      # Z/4 -> Z/2
    M = make_module(t.groups[1], [4], {1: [[3]]})
    R = restrict_along(q, M)
    assert [m.tolist() for m in R.action] == [[[1]], [[3]], [[1]], [[3]]]
    assert restrict_along(identity_quotient(M.group), M) == M
    assert restrict_along(q, trivial_module(t.groups[1], [3])).is_trivial()
    with pytest.raises(GroupMismatch):
        restrict_along(q, trivial_module(t.groups[2], [3]))


def test_restriction_is_functorial():
    t = cyclic_p_tower(2, 3)
    M = make_module(t.groups[1], [4], {1: [[3]]})
    a, b = t.maps[2], t.maps[1]        # Z/8 -> Z/4 -> Z/2
    assert restrict_along(b.compose(a), M) == restrict_along(a, restrict_along(b, M))


@given(st.integers(0, 2 ** 32 - 1))
def test_random_modules_are_valid(seed):
    rng = np.random.default_rng(seed)
    groups = small_groups(16)
    G = groups[int(rng.integers(len(groups)))]
    M = random_module(rng, G, 32)
    assert M.order <= 32
    orders = np.array(M.abgroup.orders, dtype=np.int64)[:, None]
    for g in range(G.order):
        for h in range(G.order):
            lhs = M.matrix_np(G.mul(g, h)) % orders
            rhs = (M.matrix_np(g) @ M.matrix_np(h)) % orders
            assert (lhs == rhs).all()
