import pytest
from hypothesis import given, settings, strategies as st

from utgraded import PrimeField, Rationals
from utgraded.errors import DimensionMismatch
from utgraded.matrices import (Matrix, Subspace, inverse, invert_or_rank,
                               kernel_basis, kronecker, rank, rref, solve)

from conftest import mat


def test_solve_identity(Q):
    a = Matrix.identity(Q, 2)
    b = [Q.from_int(1), Q.from_int(2)]
    assert solve(a, b) == b


def test_kernel_normalized(Q):
    a = mat(Q, [[1, 1], [2, 2]])
    k = kernel_basis(a)
    assert k == [[Q.one, Q.from_int(-1)]]


def test_gf5_solve_matches_brute_force(F5):
    a = mat(F5, [[1, 2], [3, 4]])
    b = [0, 1]
    # oracle: enumerate all 25 vectors
    hits = [(x, y) for x in range(5) for y in range(5)
            if ((x + 2 * y) % 5, (3 * x + 4 * y) % 5) == (0, 1)]
    assert hits == [(1, 2)]
    assert solve(a, b) == [1, 2]


def test_invert_or_rank(Q):
    assert invert_or_rank(Matrix.identity(Q, 3)) == Matrix.identity(Q, 3)
    assert invert_or_rank(mat(Q, [[0, 1], [0, 0]])) == 1
    assert invert_or_rank(mat(Q, [[1, 1], [0, 1]])) == mat(Q, [[1, -1], [0, 1]])


def test_kron_identity(Q):
    i2 = Matrix.identity(Q, 2)
    assert kronecker(i2, i2) == Matrix.identity(Q, 4)


def test_kron_matrix_units(Q):
    e11 = mat(Q, [[1, 0], [0, 0]])
    out = kronecker(e11, e11)
    expect = Matrix.zeros(Q, 4, 4)
    expect.rows[0][0] = Q.one
    assert out == expect


def test_kron_square_by_direct_multiplication(Q):
    x = mat(Q, [[0, 1], [1, 0]])
    z = mat(Q, [[1, 0], [0, -1]])
    k = kronecker(x, z)
    assert k.mul(k) == Matrix.identity(Q, 4)


def test_dimension_mismatch(Q):
    with pytest.raises(DimensionMismatch):
        mat(Q, [[1, 0]]).mul(mat(Q, [[1, 0]]))


small_entries = st.integers(min_value=-4, max_value=4)


def _random_matrix(field, rows, cols, entries):
    return Matrix.from_int_rows(field, [entries[r * cols:(r + 1) * cols]
                                        for r in range(rows)])


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), st.data())
def test_solve_consistency_and_rank_nullity(n, m, data):
    F = PrimeField(7)
    entries = data.draw(st.lists(small_entries, min_size=n * m, max_size=n * m))
    a = _random_matrix(F, n, m, entries)
    x = [F.from_int(v) for v in
         data.draw(st.lists(small_entries, min_size=m, max_size=m))]
    b = a.mul_vec(x)
    s = solve(a, b)
    assert s is not None and a.mul_vec(s) == b
    assert rank(a) + len(kernel_basis(a)) == m


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_kron_mixed_product(data):
    Q = Rationals()
    def draw(n):
        entries = data.draw(st.lists(small_entries, min_size=n * n, max_size=n * n))
        return _random_matrix(Q, n, n, entries)
    a, b, c, d = draw(2), draw(3), draw(2), draw(3)
    lhs = kronecker(a, b).mul(kronecker(c, d))
    rhs = kronecker(a.mul(c), b.mul(d))
    assert lhs == rhs


def test_rref_deterministic_pivoting(Q):
    rows = [[Q.from_int(v) for v in r] for r in [[0, 2, 4], [1, 1, 1]]]
    ech, pivots = rref(Q, rows)
    assert pivots == [0, 1]
    assert ech[0][0] == Q.one and ech[1][1] == Q.one


def test_subspace_equality_and_intersection(Q):
    s1 = Subspace(Q, 3, [[Q.one, Q.zero, Q.zero], [Q.zero, Q.one, Q.zero]])
    s2 = Subspace(Q, 3, [[Q.zero, Q.one, Q.zero], [Q.one, Q.zero, Q.zero]])
    assert s1 == s2
    s3 = Subspace(Q, 3, [[Q.zero, Q.one, Q.one]])
    inter = s1.intersection(s3)
    assert inter.dim == 0
    s4 = Subspace(Q, 3, [[Q.one, Q.one, Q.zero]])
    assert s1.intersection(s4).dim == 1
    assert s1.contains([Q.from_int(2), Q.from_int(-7), Q.zero])
    assert not s1.contains([Q.zero, Q.zero, Q.one])


def test_subspace_coordinates(Q):
    s = Subspace(Q, 3, [[Q.one, Q.zero, Q.one], [Q.zero, Q.one, Q.one]])
    coords = s.coordinates([Q.from_int(2), Q.from_int(3), Q.from_int(5)])
    assert coords == [Q.from_int(2), Q.from_int(3)]
    assert s.coordinates([Q.one, Q.zero, Q.zero]) is None


def test_inverse_round_trip(F101):
    a = mat(F101, [[1, 2, 0], [0, 1, 5], [3, 0, 1]])
    ainv = inverse(a)
    assert a.mul(ainv) == Matrix.identity(F101, 3)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_solve_after_product(data):
    # solve(A, A x) returns some solution s with A s = A x over the rationals
    Q = Rationals()
    n = data.draw(st.integers(2, 3))
    entries = data.draw(st.lists(small_entries, min_size=n * n, max_size=n * n))
    a = _random_matrix(Q, n, n, entries)
    x = [Q.from_int(v) for v in
         data.draw(st.lists(small_entries, min_size=n, max_size=n))]
    b = a.mul_vec(x)
    s = solve(a, b)
    assert s is not None and a.mul_vec(s) == b
