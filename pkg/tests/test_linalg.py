from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ainfty.linalg import (LinAlgError, Matrix, as_scalar, format_rational, inverse, invert_on_complement,
                           is_positive_definite, kernel_basis, orthogonal_projector, parse_rational, rank,
                           solve_linear)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def matrices(max_rows=4, max_cols=4):
    return st.integers(0, max_rows).flatmap(
        lambda r: st.integers(0, max_cols).flatmap(
            lambda c: st.lists(st.lists(rationals, min_size=c, max_size=c), min_size=r, max_size=r)
            .map(lambda rows: Matrix.from_rows(rows, cols=c))))


def test_parse_and_format_roundtrip():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("−2") == -2
    assert format_rational(Fraction(-4, 2)) == "-2"
    assert format_rational(Fraction(2, -6)) == "-1/3"
    with pytest.raises(LinAlgError):
        parse_rational("1/0")
    with pytest.raises(LinAlgError):
        parse_rational("x")


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_scalar(0.5)


def test_empty_shapes():
    z = Matrix.zeros(0, 3)
    assert z.shape == (0, 3)
    assert rank(z) == 0
    assert len(kernel_basis(z)) == 3
    assert (Matrix.zeros(2, 0) @ Matrix.zeros(0, 3)).is_zero()


def test_inverse_and_singular():
    A = Matrix.from_rows([[2, 1], [1, 1]])
    assert A @ inverse(A) == Matrix.identity(2)
    with pytest.raises(LinAlgError):
        inverse(Matrix.from_rows([[1, 2], [2, 4]]))


def test_solve_inconsistent():
    A = Matrix.from_rows([[1, 1], [2, 2]])
    assert solve_linear(A, [1, 3]) is None
    x = solve_linear(A, [1, 2])
    assert A.apply(x) == (1, 2)


def test_positive_definite():
    assert is_positive_definite(Matrix.from_rows([[2, -1], [-1, 2]]))
    assert not is_positive_definite(Matrix.from_rows([[1, 2], [2, 1]]))
    assert not is_positive_definite(Matrix.from_rows([[1, 1], [0, 1]]))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(A):
    K = kernel_basis(A)
    assert rank(A) + len(K) == A.cols
    for k in K:
        assert not any(A.apply(k))


@settings(max_examples=40, deadline=None)
@given(matrices(), st.data())
def test_solve_recovers_consistent_rhs(A, data):
    x = data.draw(st.lists(rationals, min_size=A.cols, max_size=A.cols))
    b = A.apply(x)
    y = solve_linear(A, b)
    assert y is not None and A.apply(y) == b


def test_orthogonal_projector_with_gram():
    G = Matrix.from_rows([[2, 1], [1, 3]])
    P = orthogonal_projector([(1, 0)], G)
    assert P @ P == P
    assert G @ P == P.T @ G


def test_invert_on_complement():
    A = Matrix.from_rows([[1, -1], [-1, 1]])
    K = kernel_basis(A)
    B = invert_on_complement(A, K, Matrix.identity(2))
    pi = orthogonal_projector(K, Matrix.identity(2))
    assert A @ B == Matrix.identity(2) - pi
    assert B @ pi == Matrix.zeros(2, 2)
    with pytest.raises(LinAlgError):
        invert_on_complement(A, [], Matrix.identity(2))
