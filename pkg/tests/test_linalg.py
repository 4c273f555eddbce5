import pytest
from hypothesis import given, strategies as st

from khtorsion.linalg import (SparseIntMatrix, factorize, invariant_factors_from_diagonal,
                              primary_decomposition, rank, smith_normal_form)

import oracles


@st.composite
def dense_matrices(draw, max_dim=8, lo=-10, hi=10, density=None):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    entry = st.integers(lo, hi)
    if density:
        entry = st.one_of(st.just(0), st.just(0), entry)
    return [[draw(entry) for _ in range(c)] for _ in range(r)]


def test_sparse_matrix_invariants():
    m = SparseIntMatrix(2, 2, [{0: 0, 1: 3}, {}])
    assert m.cols == [{1: 3}, {}]
    assert m.nnz == 1
    with pytest.raises(IndexError):
        SparseIntMatrix(2, 1, [{2: 1}])
    with pytest.raises(ValueError):
        SparseIntMatrix(2, 2, [{}])
    with pytest.raises(IndexError):
        SparseIntMatrix.from_entries(2, 2, [(0, 2, 1)])


def test_from_entries_accumulates_and_drops_zeros():
    m = SparseIntMatrix.from_entries(2, 2, [(0, 0, 1), (0, 0, -1), (1, 1, 2), (1, 1, 3)])
    assert m.to_dense() == [[0, 0], [0, 5]]
    assert m.nnz == 1


@given(dense_matrices(max_dim=5), st.data())
def test_matmul_and_transpose_match_dense(a, data):
    inner = len(a[0])
    b = data.draw(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3),
                           min_size=inner, max_size=inner))
    A = SparseIntMatrix.from_dense(a)
    B = SparseIntMatrix.from_dense(b)
    assert (A @ B).to_dense() == oracles.matmul(a, b, inner)
    assert A.transpose().to_dense() == [list(r) for r in zip(*a)]
    assert A.transpose().transpose() == A
    with pytest.raises(ValueError):
        A @ SparseIntMatrix.zeros(inner + 1, 1)


def test_snf_examples():
    eye = SparseIntMatrix.from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    res = smith_normal_form(eye)
    assert res.invariant_factors == (1, 1, 1) and res.rank == 3
    res = smith_normal_form(SparseIntMatrix.from_dense([[2, 4], [6, 8]]))
    assert res.invariant_factors == (2, 4)
    assert res.torsion == (2, 4)
    assert smith_normal_form(SparseIntMatrix.zeros(3, 2)).invariant_factors == ()
    assert smith_normal_form(SparseIntMatrix.zeros(0, 0)).rank == 0


@given(dense_matrices(max_dim=8))
def test_snf_matches_dense_oracle(a):
    got = smith_normal_form(SparseIntMatrix.from_dense(a)).invariant_factors
    assert list(got) == oracles.invariant_factors(a, len(a), len(a[0]))


@given(dense_matrices(max_dim=8, density=True))
def test_snf_sparse_inputs_match_dense_oracle(a):
    got = smith_normal_form(SparseIntMatrix.from_dense(a)).invariant_factors
    assert list(got) == oracles.invariant_factors(a, len(a), len(a[0]))


@given(dense_matrices(max_dim=8))
def test_snf_divisibility_chain(a):
    res = smith_normal_form(SparseIntMatrix.from_dense(a))
    f = res.invariant_factors
    assert all(d >= 1 for d in f)
    assert all(f[k + 1] % f[k] == 0 for k in range(len(f) - 1))
    assert res.rank <= min(len(a), len(a[0]))


@given(st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-10, 10), min_size=n, max_size=n),
                       min_size=n, max_size=n)))
def test_snf_preserves_abs_det(a):
    res = smith_normal_form(SparseIntMatrix.from_dense(a))
    d = abs(oracles.det(a))
    prod = 1
    for x in res.invariant_factors:
        prod *= x
    assert (prod if res.rank == len(a) else 0) == d


@given(dense_matrices(max_dim=4, lo=-6, hi=6))
def test_snf_matches_determinantal_divisors(a):
    divisors = oracles.determinantal_divisors(a)
    expected = [divisors[0]] + [divisors[k] // divisors[k - 1] for k in range(1, len(divisors))] \
        if divisors else []
    assert list(smith_normal_form(SparseIntMatrix.from_dense(a)).invariant_factors) == expected


def test_snf_large_entries_no_overflow():
    big = 2 ** 80
    m = SparseIntMatrix.from_dense([[big, 0], [0, 3 * big]])
    assert smith_normal_form(m).invariant_factors == (big, 3 * big)


def test_rank():
    assert rank(SparseIntMatrix.from_dense([[1, 2], [2, 4]])) == 1


def test_factorize_and_primary():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(1) == {}
    assert factorize(-12) == {2: 2, 3: 1}
    assert factorize(2 ** 23 - 1) == {47: 1, 178481: 1}
    assert primary_decomposition([12, 2]) == (2, 3, 4)
    assert primary_decomposition([]) == ()


@given(st.lists(st.integers(1, 200), max_size=6))
def test_invariant_factor_normalisation(diag):
    chain = invariant_factors_from_diagonal(diag)
    assert len(chain) == len(diag)
    assert all(chain[k + 1] % chain[k] == 0 for k in range(len(chain) - 1))
    prod_in = prod_out = 1
    for d in diag:
        prod_in *= d
    for d in chain:
        prod_out *= d
    assert prod_in == prod_out
    assert primary_decomposition(chain) == primary_decomposition(diag)


def test_invariant_factor_example():
    assert invariant_factors_from_diagonal([2, 3, 4]) == (1, 2, 12)
    with pytest.raises(ValueError):
        invariant_factors_from_diagonal([0])
