from hypothesis import given, strategies as st

from profhom.matrix import IntMatrix
from profhom.smith import invariant_factors, smith_decompose


def _check(M):
    U, D, V = smith_decompose(M)
    assert U @ M @ V == D
    assert abs(U.determinant()) == 1 and abs(V.determinant()) == 1
    assert D.is_diagonal()
    diag = [D[(i, i)] for i in range(min(D.rows, D.cols))]
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert diag[:len(nz)] == nz                    # zeros trail
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    return diag


def test_diag_2_3_becomes_1_6():
    assert _check(IntMatrix([[2, 0], [0, 3]])) == [1, 6]


def test_identity_is_its_own_form():
    assert _check(IntMatrix.identity(4)) == [1, 1, 1, 1]


def test_zero_matrix():
    assert _check(IntMatrix.zeros(2, 3)) == [0, 0]


def test_empty_matrix():
    U, D, V = smith_decompose(IntMatrix.zeros(0, 3))
    assert D.shape == (0, 3) and V.shape == (3, 3)


def test_entry_access_out_of_range_is_an_error():
    M = IntMatrix([[1, 2]])
    try:
        M[(1, 0)]
    except IndexError:
        return
    raise AssertionError("out-of-range access must raise")


def test_invariant_factors_gcd_of_minors():
    # g_1 = gcd(entries) = 2, g_2 = |det| = 12
    assert invariant_factors(IntMatrix([[2, 4], [6, 0]])) == [2, 12]


sparse_entry = st.one_of(st.just(0), st.just(0), st.integers(-50, 50))


@st.composite
def sparse_matrices(draw, max_dim=40):
    m = draw(st.integers(0, max_dim))
    n = draw(st.integers(0, max_dim))
    rows = draw(st.lists(st.lists(sparse_entry, min_size=n, max_size=n), min_size=m, max_size=m))
    return IntMatrix(rows, m, n)


@given(sparse_matrices(max_dim=12))
def test_smith_property_small(M):
    _check(M)


@given(sparse_matrices(max_dim=40))
def test_smith_property_up_to_40(M):
    _check(M)
