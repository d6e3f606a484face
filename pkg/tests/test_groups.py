import pytest

from profhom.errors import (NoInverse, NotAssociative, NotHomomorphism, NotNormal,
                            NotSubgroup, NotSurjective, SizeOverflow)
from profhom.generators import small_groups
from profhom.groups import (QuotientMap, cyclic_group, cyclic_p_tower,
                            identity_quotient, make_group, make_quotient, normal_subgroups,
                            power, symmetric_group)


def test_z2_table():
    G = make_group([[0, 1], [1, 0]])
    assert G.order == 2 and G.generators == (1,)


def test_missing_inverse():
    with pytest.raises(NoInverse) as e:
        make_group([[0, 1], [1, 1]])
    assert e.value.witness == 1


def test_z4_table_generator():
    G = make_group([[(a + b) % 4 for b in range(4)] for a in range(4)])
    assert G.generators == (1,) and G.is_cyclic()


def test_non_associative_witness():
    # a latin square with identity 0 that is not associative
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(NotAssociative) as e:
        make_group(t)
    a, b, c = e.value.witness
    assert t[t[a][b]][c] != t[a][t[b][c]]


def test_quotient_of_z4():
    Q, q = make_quotient(cyclic_group(4), {0, 2})
    assert Q.order == 2 and q.images == (0, 1, 0, 1)


def test_trivial_kernel_gives_identity():
    S3 = symmetric_group(3)
    Q, q = make_quotient(S3, {0})
    assert Q == S3 and q.images == tuple(range(6))


def test_non_normal_kernel_has_witness():
    S3 = symmetric_group(3)
    t = next(a for a in range(6) if S3.element_order(a) == 2)
    with pytest.raises(NotNormal) as e:
        make_quotient(S3, {0, t})
    g, n, c = e.value.witness
    assert S3.conj(g, n) == c and c not in {0, t}


def test_non_subgroup_kernel():
    with pytest.raises(NotSubgroup):
        make_quotient(cyclic_group(4), {0, 1})


def test_power_enumeration():
    P = power(cyclic_group(2), 3)
    assert list(P) == [(a, b, c) for a in range(2) for b in range(2) for c in range(2)]
    assert list(power(cyclic_group(5), 0)) == [()]
    with pytest.raises(SizeOverflow):
        power(cyclic_group(6), 8)


@pytest.mark.parametrize("G", [G for G in small_groups(16) if G.order <= 16],
                         ids=lambda G: f"{G.name or 'G'}_{G.order}")
def test_quotient_of_quotient_coherence(G):
    normals = normal_subgroups(G)
    for N in normals:
        Q, q = make_quotient(G, N)
        for M in normals:
            if not N <= M:
                continue
            image = frozenset(q(m) for m in M)
            R2, r2 = make_quotient(Q, image)
            R1, r1 = make_quotient(G, M)
            # the two-step map G -> R2 and the one-step map G -> R1 have the same fibres
            two = r2.compose(q)
            assert R1.order == R2.order
            relabel = {}
            for g in range(G.order):
                relabel.setdefault(r1(g), two(g))
                assert relabel[r1(g)] == two(g)
            for a in range(R1.order):
                for b in range(R1.order):
                    assert relabel[R1.mul(a, b)] == R2.mul(relabel[a], relabel[b])


@pytest.mark.parametrize("p", [2, 3, 5])
def test_cyclic_towers_validate(p):
    t = cyclic_p_tower(p, 3)
    assert [G.order for G in t.groups] == [p ** i for i in range(4)]


def test_non_surjective_transition_is_rejected():
    Z2, Z4 = cyclic_group(2), cyclic_group(4)
    with pytest.raises(NotSurjective):
        QuotientMap(Z4, Z2, (0, 0, 0, 0))
    with pytest.raises(NotHomomorphism):
        QuotientMap(Z4, Z2, (0, 1, 1, 0))


def test_tower_composite():
    t = cyclic_p_tower(2, 3)
    q = t.composite(3, 1)
    assert q.images == tuple(x % 2 for x in range(8))
    assert t.composite(2, 2) == identity_quotient(t.groups[2])
