
import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import all_elements
from profhom.abelian import (AbGroup, AbHom, FinAb, cokernel, complex_homology, homology_at,
                             image, kernel, subquotient)
from profhom.errors import CompositionNonzero, NotWellDefined
from profhom.generators import random_hom_matrix
from profhom.matrix import IntMatrix
from profhom.primary import FiniteSubquotient, finite_preimage

Z = AbGroup((0,))


def hom(src, tgt, rows):
    return AbHom(AbGroup(src), AbGroup(tgt), rows)


def test_kernel_of_times_two_on_z_is_zero():
    H = complex_homology(hom((0,), (0,), [[0]]), hom((0,), (0,), [[2]]))
    assert H.group == FinAb.trivial()


def test_cokernel_of_times_two_on_z():
    H = complex_homology(hom((0,), (0,), [[2]]), hom((0,), (0,), [[0]]))
    assert H.group == FinAb([2])


def test_z4_times_two_twice_is_exact():
    H = complex_homology(hom((4,), (4,), [[2]]), hom((4,), (4,), [[2]]))
    assert H.group.is_trivial()


def test_nonzero_composition_raises():
    with pytest.raises(CompositionNonzero):
        complex_homology(hom((0,), (0,), [[1]]), hom((0,), (0,), [[1]]))


def test_ill_defined_map_raises():
    with pytest.raises(NotWellDefined):
        hom((2,), (4,), [[1]])


def test_canonical_form():
    assert FinAb.from_orders([2, 3]) == FinAb([6])
    assert FinAb.from_orders([4, 2, 0, 1]) == FinAb([2, 4, 0])
    assert FinAb([2, 4]).order() == 8 and FinAb([2, 0]).order() is None
    with pytest.raises(ValueError):
        FinAb([4, 2])
    with pytest.raises(ValueError):
        FinAb([1, 2])


@given(st.lists(st.integers(1, 30), max_size=4), st.lists(st.integers(1, 30), max_size=4))
def test_invariant_factors_are_canonical(a, b):
    # equal iff the groups have the same elementary divisors
    def elementary(orders):
        from profhom.primary import factorize
        out = []
        for o in orders:
            out += [p ** e for p, e in factorize(o).items()]
        return sorted(out)
    assert (FinAb.from_orders(a) == FinAb.from_orders(b)) == (elementary(a) == elementary(b))


def _brute_homology(B, A, C, din, dout):
    """|ker dout / im din| and the exponent, by enumerating A."""
    elems = all_elements(A.orders)
    ker = [x for x in elems if C.is_zero_element(np.array(dout.matrix.tolist(), dtype=object)
                                                 .reshape(C.ngens, A.ngens).dot(x).tolist()
                                                 if A.ngens else [0] * C.ngens)]
    im = {tuple(A.reduce(din(y))) for y in all_elements(B.orders)}
    return len(ker) // len(im), im, ker


def _abelian_iso_type(ker, im, orders):
    """Invariant factors of ker/im from element orders of the cosets."""
    n = len(ker) // len(im)
    # count elements of each order dividing d in the quotient
    counts = {}
    for x in ker:
        k = 1
        while tuple((k * a) % o for a, o in zip(x, orders)) not in im:
            k += 1
        counts[k] = counts.get(k, 0) + 1
    return n, {k: v // len(im) for k, v in counts.items()}


def _group_order_profile(G: FinAb):
    counts = {}
    for x in all_elements(G.orders):
        k = 1
        while any((k * a) % o for a, o in zip(x, G.orders)):
            k += 1
        counts[k] = counts.get(k, 0) + 1
    return G.order(), counts


small_orders = st.lists(st.sampled_from([2, 3, 4, 6, 8, 9]), min_size=0, max_size=3)


@st.composite
def finite_complexes(draw):
    a = draw(small_orders.filter(lambda o: int(np.prod(o or [1])) <= 256))
    b = draw(small_orders)
    c = draw(small_orders)
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    dout = AbHom(AbGroup(a), AbGroup(c), IntMatrix(random_hom_matrix(rng, a, c), len(c), len(a)))
    # incoming map lands in the kernel of dout: combinations of kernel generators
    ker = finite_preimage(dout.matrix, a, c) if a else []
    cols = []
    for _ in b:
        v = [0] * len(a)
        for g in ker:
            k = int(rng.integers(0, 4))
            v = [x + k * y for x, y in zip(v, g)]
        cols.append(v)
    din = AbHom(AbGroup(b), AbGroup(a),
                IntMatrix.from_columns(cols, len(a)) if cols else IntMatrix.zeros(len(a), 0),
                check=False)
    # keep only maps that are well defined on the relations of B
    ok = all(AbGroup(a).is_zero_element([o * x for x in col]) for o, col in zip(b, cols))
    return AbGroup(b), AbGroup(a), AbGroup(c), din, dout, ok


@given(finite_complexes())
def test_homology_matches_brute_force(data):
    B, A, C, din, dout, ok = data
    if not ok:
        din = AbHom.zero(B, A)
    H = homology_at(A, din, dout).group
    n, im, ker = _brute_homology(B, A, C, din, dout)
    assert H.order() == n
    assert _group_order_profile(H)[1] == _abelian_iso_type(ker, im, A.orders)[1]


@given(finite_complexes())
def test_finite_engine_agrees_with_integer_path(data):
    B, A, C, din, dout, ok = data
    if not ok:
        din = AbHom.zero(B, A)
    S = homology_at(A, din, dout)
    den = [list(din.matrix.column(j)) for j in range(din.matrix.cols)] + A.relations()
    from profhom.abelian import preimage
    num = preimage(dout.matrix, C.relations()) if A.ngens else []
    T = subquotient(num + A.relations(), den, A.ngens)
    assert S.group == T.group
    # the lifts of the finite engine are cycles representing its generators
    for j, v in enumerate(S.lifts):
        e = S.express(v)
        assert e == [1 if i == j else 0 for i in range(S.group.ngens)]
        assert C.is_zero_element(dout(v))


def test_kernel_image_cokernel_small():
    f = hom((4, 6), (12,), [[3, 2]])
    assert kernel(f).group.order() * image(f).group.order() == 24
    assert cokernel(f).group.order() * image(f).group.order() == 12


def test_infinite_groups_use_integer_path():
    f = hom((0, 0), (0,), [[2, 4]])
    assert kernel(f).group == FinAb([0])
    assert cokernel(f).group == FinAb([2])


def test_induced_map_between_subquotients():
    A = (8,)
    S = FiniteSubquotient(A, [[1]], [[4]])     # Z/4
    T = FiniteSubquotient(A, [[1]], [[2]])     # Z/2
    f = S.induced(lambda v: v, T)
    assert f.matrix.tolist() == [[1]]
