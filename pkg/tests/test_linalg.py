import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import symforms as sf
from symforms import Matrix, VectorSubspace
from symforms.linalg import (
    intersection_dim,
    mat_mul,
    mat_vec,
    stacked_rank,
    vector_codes,
)

from oracle import oracle_rank

FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2)]


def _random_matrix(field, rows, cols, rng):
    return Matrix(field, rng.integers(0, field.q, size=(rows, cols)))


def test_rank_examples(gf2):
    assert sf.rank(Matrix.zeros(gf2, 3, 3)) == 0
    for n in (1, 2, 5):
        assert sf.rank(Matrix.identity(gf2, n)) == n
    M = Matrix(gf2, [[0, 0, 1], [0, 1, 1], [1, 1, 0]])
    assert sf.rank(M) == 3


def test_rank_equals_transpose_rank():
    rng = np.random.default_rng(11)
    for p, k in FIELDS:
        F = sf.make_field(p, k)
        for _ in range(20):
            M = _random_matrix(F, int(rng.integers(1, 6)), int(rng.integers(1, 6)), rng)
            assert sf.rank(M) == sf.rank(M.T)


def test_rank_against_scalar_oracle():
    rng = np.random.default_rng(23)
    for p, k in FIELDS:
        F = sf.make_field(p, k)
        for _ in range(15):
            r, c = int(rng.integers(1, 6)), int(rng.integers(1, 6))
            M = _random_matrix(F, r, c, rng)
            rows = [[M[i, j] for j in range(c)] for i in range(r)]
            assert sf.rank(M) == oracle_rank(rows)


def test_batch_rank_matches_single():
    rng = np.random.default_rng(31)
    for p, k in FIELDS:
        F = sf.make_field(p, k)
        mats = rng.integers(0, F.q, size=(40, 5, 4)).astype(F.code_dtype)
        got = sf.batch_rank(mats, F)
        for i in range(mats.shape[0]):
            assert got[i] == sf.rank(Matrix(F, mats[i]))


def test_kernel_examples(gf2):
    assert sf.kernel_basis(Matrix.identity(gf2, 4)).dim == 0
    full = sf.kernel_basis(Matrix.zeros(gf2, 2, 3))
    assert full.dim == 3
    K = sf.kernel_basis(Matrix(gf2, [[1, 1, 0]]))
    assert K.dim == 2
    assert K.contains([1, 1, 0])
    assert not K.contains([1, 0, 0])


def test_kernel_dimension_plus_rank_is_cols():
    rng = np.random.default_rng(41)
    for p, k in FIELDS:
        F = sf.make_field(p, k)
        for _ in range(20):
            M = _random_matrix(F, int(rng.integers(1, 7)), int(rng.integers(1, 7)), rng)
            K = sf.kernel_basis(M)
            assert K.dim + sf.rank(M) == M.cols
            for row in K._basis:
                assert not mat_vec(M, row).any()


def test_congruence_identity_and_permutation(gf3):
    S = Matrix(gf3, [[1, 0], [0, 0]])
    assert sf.congruence(Matrix.identity(gf3, 2), S) == S
    X = Matrix(gf3, [[0, 1], [1, 0]])
    assert sf.congruence(X, S) == Matrix(gf3, [[0, 0], [0, 1]])


def test_congruence_preserves_symmetry_and_rank(gf4):
    rng = np.random.default_rng(5)
    found = 0
    while found < 25:
        X = _random_matrix(gf4, 4, 4, rng)
        if sf.rank(X) < 4:
            continue
        found += 1
        A = rng.integers(0, 4, size=(4, 4))
        S = Matrix(gf4, np.triu(A) + np.triu(A, 1).T)
        Y = sf.congruence(X, S)
        assert Y.is_symmetric()
        assert sf.rank(Y) == sf.rank(S)


def test_congruence_composes(gf5):
    rng = np.random.default_rng(6)
    for _ in range(20):
        X1 = _random_matrix(gf5, 3, 3, rng)
        X2 = _random_matrix(gf5, 3, 3, rng)
        A = rng.integers(0, 5, size=(3, 3))
        S = Matrix(gf5, np.triu(A) + np.triu(A, 1).T)
        assert sf.congruence(X1, sf.congruence(X2, S)) == sf.congruence(
            mat_mul(X1, X2), S
        )


def test_congruence_shape_errors(gf2):
    with pytest.raises(ValueError):
        sf.congruence(Matrix.zeros(gf2, 2, 3), Matrix.zeros(gf2, 2, 2))


def test_rank_of_products():
    rng = np.random.default_rng(51)
    for p, k in FIELDS[:4]:
        F = sf.make_field(p, k)
        for _ in range(15):
            A = _random_matrix(F, 4, 3, rng)
            B = _random_matrix(F, 3, 5, rng)
            assert sf.rank(mat_mul(A, B)) <= min(sf.rank(A), sf.rank(B))


def test_complete_basis_examples(gf2):
    W = VectorSubspace.from_vectors(gf2, 2, [[1, 0]])
    assert sf.complete_basis(W) == Matrix.identity(gf2, 2)
    Z = VectorSubspace.zero(gf2, 3)
    assert sf.complete_basis(Z) == Matrix.identity(gf2, 3)
    W2 = VectorSubspace.from_vectors(gf2, 3, [[1, 1, 0]])
    X = sf.complete_basis(W2)
    assert tuple(int(c) for c in X._arr[0]) == (1, 1, 0)
    assert sf.rank(X) == 3


def test_complete_basis_always_invertible():
    rng = np.random.default_rng(61)
    for p, k in FIELDS:
        F = sf.make_field(p, k)
        for _ in range(15):
            n = int(rng.integers(1, 7))
            m = int(rng.integers(0, n + 1))
            W = VectorSubspace.from_vectors(
                F, n, rng.integers(0, F.q, size=(m, n)).astype(F.code_dtype)
            )
            X = sf.complete_basis(W)
            assert sf.rank(X) == n
            assert np.array_equal(X._arr[: W.dim], W._basis)


def test_vector_subspace_canonical_equality(gf2):
    A = VectorSubspace.from_vectors(gf2, 3, [[1, 1, 0], [0, 1, 1]])
    B = VectorSubspace.from_vectors(gf2, 3, [[1, 0, 1], [0, 1, 1]])
    assert A == B and hash(A) == hash(B)
    C = VectorSubspace.from_vectors(gf2, 3, [[1, 0, 0]])
    assert A != C


def test_intersection_and_stack(gf2):
    A = VectorSubspace.from_vectors(gf2, 4, [[1, 0, 0, 0], [0, 1, 0, 0]])
    B = VectorSubspace.from_vectors(gf2, 4, [[0, 1, 0, 0], [0, 0, 1, 0]])
    assert intersection_dim(A, B) == 1
    assert stacked_rank(gf2, A._basis, B._basis) == 3


def test_matrix_validation(gf2):
    with pytest.raises(ValueError):
        Matrix(gf2, [[0, 2]])
    with pytest.raises(ValueError):
        vector_codes(gf2, [0, 1, 2])
    with pytest.raises(ValueError):
        Matrix(gf2, np.zeros((70, 2), dtype=np.uint16))


def test_matrix_immutability(gf2):
    M = Matrix.identity(gf2, 2)
    with pytest.raises(ValueError):
        M._arr[0, 0] = 0
    with pytest.raises(AttributeError):
        M.field = gf2


@given(st.sampled_from(FIELDS), st.integers(1, 5), st.integers(1, 5), st.data())
@settings(max_examples=40, deadline=None)
def test_row_space_is_involution_of_rank(pk, r, c, data):
    F = sf.make_field(*pk)
    entries = data.draw(
        st.lists(
            st.lists(st.integers(0, F.q - 1), min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        )
    )
    M = Matrix(F, entries)
    V = VectorSubspace.from_vectors(F, c, M._arr)
    assert V.dim == sf.rank(M)
    for row in entries:
        assert V.contains(row)
