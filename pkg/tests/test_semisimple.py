from utgraded import PrimeField, Rationals
from utgraded.matrices import Matrix, rank
from utgraded.semisimple import (factor_polynomial, minimal_polynomial,
                                 primitive_idempotent)

from conftest import mat, units


def _is_idempotent(m):
    return m.mul(m) == m


def test_minimal_polynomial_nilpotent():
    Q = Rationals()
    u = units(Q, 2)
    mu = minimal_polynomial(Q, u[(0, 1)], Matrix.identity(Q, 2))
    assert mu == [Q.zero, Q.zero, Q.one]  # x^2


def test_minimal_polynomial_diagonal():
    Q = Rationals()
    d = mat(Q, [[1, 0], [0, 2]])
    mu = minimal_polynomial(Q, d, Matrix.identity(Q, 2))
    # (x-1)(x-2) = x^2 - 3x + 2
    assert mu == [Q.from_int(2), Q.from_int(-3), Q.one]


def test_factor_polynomial_rationals():
    Q = Rationals()
    # x^2 - 3x + 2 = (x-1)(x-2)
    factors = factor_polynomial(Q, [Q.from_int(2), Q.from_int(-3), Q.one])
    assert sorted(str(f) for f, _ in factors) == \
        sorted([str([Q.from_int(-1), Q.one]), str([Q.from_int(-2), Q.one])])
    # x^2 + 1 irreducible over Q
    factors = factor_polynomial(Q, [Q.one, Q.zero, Q.one])
    assert len(factors) == 1 and factors[0][1] == 1


def test_factor_polynomial_gf():
    F = PrimeField(5)
    # x^2 + 1 = (x-2)(x-3) over GF(5)
    factors = factor_polynomial(F, [1, 0, 1])
    assert len(factors) == 2
    # x^2 - 2 irreducible over GF(5) (2 is not a square mod 5)
    factors = factor_polynomial(F, [3, 0, 1])
    assert len(factors) == 1


def test_primitive_idempotent_diagonal_algebra():
    Q = Rationals()
    u = units(Q, 2)
    f = primitive_idempotent(Q, [u[(0, 0)], u[(1, 1)]], Matrix.identity(Q, 2))
    assert _is_idempotent(f) and rank(f) == 1


def test_primitive_idempotent_full_matrix_algebra():
    Q = Rationals()
    u = units(Q, 2)
    basis = [u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]]
    f = primitive_idempotent(Q, basis, Matrix.identity(Q, 2))
    assert _is_idempotent(f) and rank(f) == 1


def test_primitive_idempotent_conjugated_diagonal():
    # the identity component of an elementary grading on M_2 conjugated by
    # [[1,1],[1,2]]; every echelon basis vector of the span is invertible,
    # so naive minimum-rank scanning would fail here
    Q = Rationals()
    s = mat(Q, [[1, 1], [1, 2]])
    sinv = mat(Q, [[2, -1], [-1, 1]])
    u = units(Q, 2)
    basis = [s.mul(u[(0, 0)]).mul(sinv), s.mul(u[(1, 1)]).mul(sinv)]
    f = primitive_idempotent(Q, basis, Matrix.identity(Q, 2))
    assert _is_idempotent(f)
    assert rank(f) == 1
    # f must lie in the span of the two conjugated projectors
    from utgraded.matrices import Subspace
    span = Subspace(Q, 4, [[m.rows[0][0], m.rows[0][1], m.rows[1][0],
                            m.rows[1][1]] for m in basis])
    assert span.contains([f.rows[0][0], f.rows[0][1], f.rows[1][0],
                          f.rows[1][1]])


def test_primitive_idempotent_field_corner_is_unity():
    # span{I, u} with u^2 = 2 is a field over Q; nothing splits
    Q = Rationals()
    umat = mat(Q, [[0, 2], [1, 0]])
    f = primitive_idempotent(Q, [Matrix.identity(Q, 2), umat],
                             Matrix.identity(Q, 2))
    assert f == Matrix.identity(Q, 2)


def test_primitive_idempotent_split_field_corner_over_gf():
    # over GF(7), 2 = 3^2 is a square, so span{I, u} = GF(7) x GF(7) splits
    F = PrimeField(7)
    umat = mat(F, [[0, 2], [1, 0]])
    f = primitive_idempotent(F, [Matrix.identity(F, 2), umat],
                             Matrix.identity(F, 2))
    assert _is_idempotent(f)
    assert rank(f) == 1


def test_primitive_idempotent_m3_block_diagonal():
    Q = Rationals()
    u = units(Q, 3)
    # M_2 + K corner sitting inside M_3
    basis = [u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)], u[(2, 2)]]
    f = primitive_idempotent(Q, basis, Matrix.identity(Q, 3))
    assert _is_idempotent(f) and rank(f) == 1
