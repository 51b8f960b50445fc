import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mostperfect.zp import (DimensionError, ModulusError, Residue, SingularMatrixError, ZpError,
                            ZpMatrix, ZpVector, determinant, format_matrix, format_vector, invert,
                            is_nonsingular, is_prime, mat_mul, mat_vec_mul, parse_matrix_text, rank,
                            solve)

from .conftest import M_P2_R3, M_P3_R2

PRIMES = [2, 3, 5, 7]


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(97)
    assert not is_prime(91)


def test_residue_canonical():
    assert Residue(-1, 5).value == 4
    assert Residue(2, 5) * 3 == 1
    assert Residue(2, 5).inverse() == Residue(3, 5)
    with pytest.raises(ModulusError):
        Residue(1, 4)
    with pytest.raises(ZeroDivisionError):
        Residue(0, 7).inverse()
    with pytest.raises(ModulusError):
        Residue(1, 3) + Residue(1, 5)


def test_negative_literals_stored_as_p_minus_one():
    m = ZpMatrix.from_rows([[-1, 0], [1, -2]], 5)
    assert m.to_rows() == [[4, 0], [1, 3]]


def test_m_p2_r3_maps_26_to_location_of_26():
    v = ZpVector([0, 1, 1, 0, 1, 0], 2)
    assert list(mat_vec_mul(M_P2_R3, v)) == [0, 1, 1, 1, 0, 1]


def test_m_p3_r2_times_delta():
    # row by row mod 3: 2*2+2*1+2*2+0 = 10, 0+0+2+1 = 3, 4+0+4+2 = 10, 2+1 = 3
    assert list(M_P3_R2 @ ZpVector([2, 1, 2, 1], 3)) == [1, 0, 1, 0]


def test_identity_mat_vec():
    v = ZpVector([3, 1, 4, 1], 5)
    assert mat_vec_mul(ZpMatrix.identity(4, 5), v) == v


def test_mat_vec_errors():
    with pytest.raises(DimensionError):
        mat_vec_mul(ZpMatrix.identity(3, 2), ZpVector([1, 0], 2))
    with pytest.raises(ModulusError):
        mat_vec_mul(ZpMatrix.identity(2, 2), ZpVector([1, 0], 3))


def test_nonsingular_examples():
    assert is_nonsingular(M_P2_R3)
    assert is_nonsingular(M_P3_R2)
    assert not is_nonsingular(ZpMatrix.zeros(3, 3, 7))
    assert not is_nonsingular(ZpMatrix.from_rows([[1, 1], [1, 1]], 2))
    with pytest.raises(DimensionError):
        is_nonsingular(ZpMatrix.zeros(2, 3, 2))


def test_invert_examples():
    assert invert(ZpMatrix.identity(5, 3)) == ZpMatrix.identity(5, 3)
    assert invert(M_P3_R2) @ M_P3_R2 == ZpMatrix.identity(4, 3)
    assert invert(ZpMatrix.from_rows([[2]], 5)).to_rows() == [[3]]
    with pytest.raises(SingularMatrixError):
        invert(ZpMatrix.from_rows([[1, 1], [1, 1]], 2))


def test_determinant_examples():
    for d in range(1, 6):
        assert determinant(ZpMatrix.identity(d, 7)) == 1
    assert determinant(ZpMatrix.from_rows([[1, 2], [2, 4]], 5)) == 0
    assert determinant(ZpMatrix.from_rows([[0, 1], [1, 0]], 5)) == Residue(-1, 5)
    with pytest.raises(DimensionError):
        determinant(ZpMatrix.zeros(1, 2, 3))


def _leibniz_det(rows, p):
    """Permutation-expansion determinant; independent of elimination."""
    d = len(rows)
    total = 0
    for perm in itertools.permutations(range(d)):
        inversions = sum(1 for i in range(d) for j in range(i + 1, d) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i in range(d):
            term *= rows[i][perm[i]]
        total += term
    return total % p


@st.composite
def matrices(draw, max_dim=8, square=True):
    p = draw(st.sampled_from(PRIMES))
    rows = draw(st.integers(1, max_dim))
    cols = rows if square else draw(st.integers(1, max_dim))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols))
    return ZpMatrix(rows, cols, entries, p)


@given(matrices(max_dim=5))
def test_determinant_matches_leibniz(m):
    assert determinant(m).value == _leibniz_det(m.to_rows(), m.p)


@given(matrices())
def test_canonical_form_everywhere(m):
    results = [m, m.transpose(), mat_mul(m, m)]
    if is_nonsingular(m):
        results.append(invert(m))
    for res in results:
        assert all(0 <= x < m.p for x in res.entries)


@settings(max_examples=200)
@given(matrices())
def test_inverse_both_sides(m):
    if not is_nonsingular(m):
        with pytest.raises(SingularMatrixError):
            invert(m)
        return
    inv = invert(m)
    eye = ZpMatrix.identity(m.rows, m.p)
    assert inv @ m == eye
    assert m @ inv == eye


@given(matrices())
def test_nonsingular_iff_det_nonzero(m):
    assert is_nonsingular(m) == (determinant(m).value != 0)
    assert is_nonsingular(m) == (rank(m) == m.rows)


@given(matrices(square=False), st.data())
def test_mat_vec_distributes(m, data):
    vec = st.lists(st.integers(0, m.p - 1), min_size=m.cols, max_size=m.cols)
    u = ZpVector(data.draw(vec), m.p)
    v = ZpVector(data.draw(vec), m.p)
    assert m @ (u + v) == (m @ u) + (m @ v)


@given(matrices(), st.data())
def test_solve(m, data):
    if not is_nonsingular(m):
        return
    b = ZpVector(data.draw(st.lists(st.integers(0, m.p - 1), min_size=m.rows, max_size=m.rows)), m.p)
    assert m @ solve(m, b) == b


def test_text_format_round_trip():
    assert parse_matrix_text(format_matrix(M_P2_R3)) == M_P2_R3
    v = ZpVector([2, 1, 2, 1], 3)
    assert format_vector(v) == "3 4\n2 1 2 1\n"
    assert parse_matrix_text(format_vector(v)) == v
    assert format_matrix(M_P3_R2).splitlines()[0] == "3 4 4"


@pytest.mark.parametrize("text", ["", "3 2 2\n1 2\n", "3 2 2\n1 2\n0 3\n", "4 1 1\n1\n", "3 x 2\n", "1 2 3 4\n"])
def test_text_format_rejects(text):
    with pytest.raises(ZpError):
        parse_matrix_text(text)
