import pytest

from utgraded import PrimeField, Rationals
from utgraded.matrices import Matrix


@pytest.fixture(scope="session")
def Q():
    return Rationals()


@pytest.fixture(scope="session")
def F5():
    return PrimeField(5)


@pytest.fixture(scope="session")
def F101():
    return PrimeField(101)


def mat(field, rows):
    return Matrix.from_int_rows(field, rows)


def units(field, n):
    """All matrix units of M_n as a dict (r, c) -> Matrix."""
    out = {}
    for r in range(n):
        for c in range(n):
            m = Matrix.zeros(field, n, n)
            m.rows[r][c] = field.one
            out[(r, c)] = m
    return out
