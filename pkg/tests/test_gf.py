import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modlat.gf import (FieldMismatchError, FieldSpec, Matrix, ShapeError, add, from_rows, is_prime, kernel,
                       multiply, random_matrix, rank, rref, scale, stack)
from modlat.rng import SeededRng

from bruteforce import py_rank, py_rref

F2, F3, F5 = FieldSpec(2), FieldSpec(3), FieldSpec(5)


@st.composite
def matrices(draw, qs=(2, 3, 5, 7, 101), max_dim=6):
    q = draw(st.sampled_from(qs))
    m = draw(st.integers(0, max_dim))
    n = draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n), min_size=m, max_size=m))
    return Matrix(FieldSpec(q), np.array(rows, dtype=np.int64).reshape(m, n))


def test_field_rejects_non_primes_and_large():
    for bad in (0, 1, 4, 9, 1 << 31, -3):
        with pytest.raises(ValueError):
            FieldSpec(bad)
    assert FieldSpec(2147483647).q == 2147483647


def test_is_prime_small():
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_inverse():
    f = FieldSpec(101)
    assert all(a * f.inv(a) % 101 == 1 for a in range(1, 101))


def test_rref_small_example():
    # by hand: scale row 1 by 2^-1 = 3, subtract it from row 2, clear column 2
    r = rref(from_rows(F5, [[2, 4, 1], [1, 2, 4]]))
    assert r.R.tolist() == [[1, 2, 0], [0, 0, 1]]
    assert r.rank == 2 and r.pivots == (0, 2)
    assert rank(from_rows(F5, [[2, 4, 1], [1, 2, 3]])) == 1


def test_kernel_of_single_row():
    # x + 2y = 0 over F_5 is spanned by (1, 2): 1 + 2*2 = 5
    assert kernel(from_rows(F5, [[1, 2]])).tolist() == [[1, 2]]


def test_kernel_of_zero_and_identity():
    assert kernel(Matrix.zeros(F3, 2, 3)) == Matrix.identity(F3, 3)
    assert kernel(Matrix.identity(F3, 3)).shape == (0, 3)


def test_entries_reduced_and_immutable():
    M = Matrix(F5, [[7, -1]])
    assert M.tolist() == [[2, 4]]
    with pytest.raises(ValueError):
        M.data[0, 0] = 1
    with pytest.raises(AttributeError):
        M.field = F3


def test_shape_and_field_errors():
    with pytest.raises(ShapeError):
        add(Matrix.zeros(F2, 1, 2), Matrix.zeros(F2, 2, 1))
    with pytest.raises(ShapeError):
        multiply(Matrix.zeros(F2, 1, 2), Matrix.zeros(F2, 1, 2))
    with pytest.raises(ShapeError):
        stack(Matrix.zeros(F2, 1, 2), Matrix.zeros(F2, 1, 3))
    with pytest.raises(FieldMismatchError):
        add(Matrix.zeros(F2, 1, 2), Matrix.zeros(F3, 1, 2))
    with pytest.raises(ShapeError):
        Matrix(F2, [1, 0, 1])


def test_random_matrix_deterministic():
    a = random_matrix(4, 5, F5, SeededRng(3))
    b = random_matrix(4, 5, F5, SeededRng(3))
    c = random_matrix(4, 5, F5, SeededRng(4))
    assert a == b and a != c


@given(matrices())
def test_rref_matches_reference(M):
    r = rref(M)
    assert r.R.tolist() == py_rref(M.tolist(), M.q)
    assert r.rank == py_rank(M.tolist(), M.q)


@given(matrices())
def test_rref_is_idempotent_and_row_space_invariant(M):
    r = rref(M)
    assert rref(r.R).R == r.R
    if M.rows:
        # stacking the RREF onto the original cannot raise the rank
        assert rank(stack(M, r.R)) == r.rank


@given(matrices())
def test_kernel_annihilates(M):
    K = kernel(M)
    assert K.rows == M.cols - rank(M)
    if K.rows and M.rows:
        prod = multiply(M, Matrix(M.field, K.data.T))
        assert not prod.data.any()


@given(matrices(qs=(7,)), st.integers(0, 6))
def test_scale_and_add(M, c):
    assert add(M, scale(M, c)) == scale(M, c + 1)


@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.integers(0, 1000))
def test_multiply_associative(a, b, c, seed):
    rng = SeededRng(seed)
    A, B, C = (random_matrix(x, y, F5, rng) for x, y in ((a, b), (b, c), (c, a)))
    assert multiply(multiply(A, B), C) == multiply(A, multiply(B, C))


def test_multiply_large_prime_no_overflow():
    f = FieldSpec(2147483647)
    A = Matrix(f, [[f.q - 1] * 8])
    B = Matrix(f, [[f.q - 1]] * 8)
    assert multiply(A, B).tolist() == [[8 % f.q]]
